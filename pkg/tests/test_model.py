import math
import re

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cyclewalk.model import (
    Chirality,
    CoinParams,
    ConstraintViolation,
    DegenerateCycle,
    DistanceDistribution,
    InitialCondition,
    WalkConfig,
    WalkState,
    cs_a,
    decode,
    encode,
    hadamard,
    localized_state,
    validate_config,
)

H = math.sqrt(0.5)


def raw(**kw):
    base = dict(n=4, a=H, b=H, x0=0, p0=H, q0=H, phi=math.pi / 2)
    base.update(kw)
    return base


def test_validate_unbiased_hadamard():
    cfg = validate_config(raw())
    assert cfg.n == 4
    assert cfg.coin == hadamard()
    assert cfg.init.phi == pytest.approx(math.pi / 2)


def test_phase_is_wrapped():
    cfg = validate_config(raw(a=0.6, b=0.8, phi=3 * math.pi))
    assert abs(cfg.init.phi) == pytest.approx(math.pi, abs=1e-12)
    assert -math.pi <= cfg.init.phi <= math.pi


def test_phase_wrap_negative():
    cfg = validate_config(raw(phi=-5 * math.pi / 2))
    assert cfg.init.phi == pytest.approx(-math.pi / 2)


@pytest.mark.parametrize("n", [0, 1, 2])
def test_degenerate_cycle(n):
    with pytest.raises(DegenerateCycle):
        validate_config(raw(n=n))


@pytest.mark.parametrize(
    "kw, fragment",
    [
        (dict(a=0.6, b=0.6), "a²+b² ≠ 1"),
        (dict(a=1.0, b=0.0), "0 < a < 1"),
        (dict(p0=0.5, q0=0.5), "p0²+q0² ≠ 1"),
        (dict(x0=4), "x0"),
        (dict(a=float("nan")), "finite"),
        (dict(phi=float("inf")), "finite"),
    ],
)
def test_constraint_messages(kw, fragment):
    with pytest.raises(ConstraintViolation, match=re.escape(fragment)):
        validate_config(raw(**kw))


def test_missing_partner_completed():
    cfg = validate_config(dict(n=5, a=0.6, p0=0.8, phi=0.0))
    assert cfg.coin.b == pytest.approx(0.8)
    assert cfg.init.q0 == pytest.approx(0.6)


def test_localized_state_unbiased():
    st = localized_state(validate_config(raw()))
    assert st.amplitude(0, Chirality.L) == pytest.approx(H)
    assert st.amplitude(0, Chirality.R) == pytest.approx(1j * H)
    assert np.count_nonzero(st.amplitudes) == 2


def test_localized_state_cs_a_at_node_two():
    cfg = WalkConfig(5, hadamard(), cs_a(x0=2))
    st = localized_state(cfg)
    assert st.amplitude(2, Chirality.L) == math.sin(math.pi / 8)
    assert st.amplitude(2, Chirality.R) == math.cos(math.pi / 8)
    assert st.is_normalized()


def test_states_are_immutable():
    st = localized_state(validate_config(raw()))
    with pytest.raises(ValueError):
        st.amplitudes[0] = 1.0


def test_distance_distribution_clamps_tiny_negatives():
    dist = DistanceDistribution([1.0, -1e-15, 0.0])
    assert dist.probs[1] == 0.0
    with pytest.raises(ConstraintViolation):
        DistanceDistribution([1.0, -1e-6])


def test_signed_distances():
    dist = DistanceDistribution(np.arange(5) / 10.0)
    d, p = dist.signed()
    assert d.tolist() == [-2, -1, 0, 1, 2]
    assert p.tolist() == [0.3, 0.4, 0.0, 0.1, 0.2]
    d, _ = DistanceDistribution(np.full(4, 0.25)).signed()
    assert d.tolist() == [-2, -1, 0, 1]


unit = st.floats(0.01, 0.99)


@given(n=st.integers(3, 60), a=unit, p0=unit, phi=st.floats(-20, 20), data=st.data())
def test_validate_idempotent_and_normalized(n, a, p0, phi, data):
    x0 = data.draw(st.integers(0, n - 1))
    cfg = validate_config(dict(n=n, a=a, p0=p0, phi=phi, x0=x0))
    again = validate_config(
        dict(n=cfg.n, a=cfg.coin.a, b=cfg.coin.b, x0=cfg.init.x0,
             p0=cfg.init.p0, q0=cfg.init.q0, phi=cfg.init.phi)
    )
    assert again == cfg
    assert localized_state(cfg).is_normalized()


@given(n=st.integers(3, 100), data=st.data())
def test_encode_decode_roundtrip(n, data):
    x = data.draw(st.integers(0, n - 1))
    chir = data.draw(st.sampled_from(list(Chirality)))
    assert decode(encode(x, chir, n), n) == (x, chir)


def test_coin_matrix_unitary():
    c = CoinParams(0.6, 0.8).matrix()
    np.testing.assert_allclose(c @ c.T, np.eye(2), atol=1e-15)


def test_initial_condition_rejects_out_of_range_phase():
    with pytest.raises(ConstraintViolation):
        InitialCondition(0, H, H, 4.0)


def test_walkstate_rejects_odd_length():
    with pytest.raises(ConstraintViolation):
        WalkState(np.ones(3))
