"""Degree-reduction (shortening) and group-equivalence tests."""

import pytest

from conftest import load_code
from qconvenc.code import ConvolutionalCode, GeneratorPolynomial, validate_code
from qconvenc.code import delay_generator, multiply_generators
from qconvenc.errors import DegenerateCodeError, WidthMismatchError, WindowError
from qconvenc.shorten import group_equivalent, normalize_leading_delay, shorten
from reference_data import CORPUS


def test_normalize_strips_leading_identity_frames():
    code = ConvolutionalCode(
        2,
        1,
        (GeneratorPolynomial.from_strings(["II", "II", "XX", "ZZ"]),),
    )
    normalized = normalize_leading_delay(code)
    assert str(normalized.generators[0]) == "XX|ZZ"


def test_normalize_rejects_identity_generator():
    code = ConvolutionalCode(
        2, 1, (GeneratorPolynomial.from_strings(["II", "II"]),)
    )
    with pytest.raises(DegenerateCodeError):
        normalize_leading_delay(code)


@pytest.mark.parametrize("name", CORPUS)
def test_corpus_already_shortened(name):
    code = load_code(name)
    report = shorten(code)
    assert report.steps == []
    assert report.output_code == code


def test_front_pass_recovers_generator(running1):
    h1, h2 = running1.generators
    inflated = ConvolutionalCode(
        4, 2, (h1, multiply_generators(h1, delay_generator(h2, 1)))
    )
    assert validate_code(inflated).valid
    report = shorten(inflated)
    assert [s.action for s in report.steps] == ["front"]
    assert report.steps[0].generator == 2
    assert report.steps[0].partners == (1,)
    assert report.output_code == running1
    assert group_equivalent(inflated, running1) == 1


def test_back_pass_recovers_generator(running1):
    h1, h2 = running1.generators
    inflated = ConvolutionalCode(
        4, 2, (h1, multiply_generators(h2, delay_generator(h1, 1)))
    )
    assert validate_code(inflated).valid
    report = shorten(inflated)
    assert [s.action for s in report.steps] == ["back"]
    assert report.output_code == running1


def test_normalize_step_recorded(running1):
    h1, h2 = running1.generators
    delayed = ConvolutionalCode(4, 2, (h1, delay_generator(h2, 2)))
    report = shorten(delayed)
    assert report.steps[0].action == "normalize"
    assert report.output_code == running1


def test_duplicate_generator_degenerates(running1):
    h1, _ = running1.generators
    doubled = ConvolutionalCode(4, 2, (h1, h1))
    with pytest.raises(DegenerateCodeError):
        shorten(doubled)


def test_shorten_is_idempotent_and_group_preserving(running2):
    h1, h2 = running2.generators
    inflated = ConvolutionalCode(
        4, 2, (multiply_generators(h1, h2), delay_generator(h2, 1))
    )
    report = shorten(inflated)
    assert validate_code(report.output_code).valid
    assert group_equivalent(report.output_code, running2) == 1
    again = shorten(report.output_code)
    assert again.steps == []
    total_in = sum(g.degree for g in inflated.generators)
    total_out = sum(g.degree for g in report.output_code.generators)
    assert total_out <= total_in


def test_group_equivalent_reflexive_and_discriminating(running1):
    assert group_equivalent(running1, running1) == 1
    other = load_code("forney2")
    assert group_equivalent(running1, other) == 0


def test_group_equivalent_window_contract(running1):
    with pytest.raises(WindowError):
        group_equivalent(running1, running1, window=5)
    # The minimum window is the larger degree plus the generator count.
    assert group_equivalent(running1, running1, window=6) == 1


def test_group_equivalent_width_mismatch(running1):
    other = load_code("forney4")
    with pytest.raises(WidthMismatchError):
        group_equivalent(running1, other)


def test_group_equivalent_sees_through_delay(running1):
    h1, h2 = running1.generators
    delayed = ConvolutionalCode(4, 2, (h1, delay_generator(h2, 1)))
    assert group_equivalent(running1, delayed) == 1
