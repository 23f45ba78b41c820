import math

import pytest

from instance_geom.adversary import AdversaryReport, AdversaryState, adversary_session
from instance_geom.errors import ConfigError, GeometryError


@pytest.mark.parametrize("algorithm", ["maxima2d", "maxima2d-left", "sortscan"])
def test_session_is_consistent(make, algorithm):
    S = make("maxima-hard", 64, seed=2)
    rep = adversary_session(S, algorithm, seed=1, state_checks=True)
    assert rep.replay_ok
    assert rep.sound
    assert sorted(rep.sigma) == list(range(64))
    assert rep.h_kd == pytest.approx(6.0)
    assert rep.T >= 63


def test_session_on_easy_instance(make):
    S = make("maxima-easy", 64, seed=5)
    rep = adversary_session(S, "maxima2d", seed=0, state_checks=True)
    assert rep.replay_ok and rep.sound
    assert rep.h_kd < 6.0


def test_bruteforce_session(make):
    rep = adversary_session(make("uniform-square", 24, seed=1), "bruteforce", seed=0)
    assert rep.replay_ok and rep.sound


def test_state_rejects_self_comparison(make):
    state = AdversaryState(make("maxima-hard", 8))
    with pytest.raises(GeometryError):
        state.compare(3, 3, 0)


def test_unknown_algorithm(make):
    with pytest.raises(ConfigError):
        adversary_session(make("maxima-hard", 8), "mergesort")


def test_force_ratio():
    rep = AdversaryReport(n=4, T=10, D=0, ordinary=0, exceptional=0, h_kd=0.0, replay_ok=True, sound=True)
    assert math.isinf(rep.force_ratio)
    rep.h_kd = 2.0
    assert rep.force_ratio == pytest.approx(1.25)
    assert "sigma" in rep.to_json()
