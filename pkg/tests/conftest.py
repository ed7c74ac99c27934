import numpy as np
import pytest

from rodentsim import backend
from rodentsim.model import Outcome, Response, Session, Stimulus, Trial
from rodentsim.protocol import ProtocolConfig, target_response


def session_from_outcomes(pattern, index=1, config=None):
    """Judge-consistent session from a 'CCIC...' string.

    Every trial presents the pure sweet stimulus; correct trials respond
    with its rewarded spout, incorrect ones with the opposite spout.
    """
    config = config or ProtocolConfig()
    good = target_response(Stimulus.SWEET, config)
    bad = Response.RIGHT if good is Response.LEFT else Response.LEFT
    trials = []
    for ch in pattern:
        if ch == "C":
            trials.append(Trial(Stimulus.SWEET, good, Outcome.CORRECT))
        elif ch == "I":
            trials.append(Trial(Stimulus.SWEET, bad, Outcome.INCORRECT))
        else:
            raise ValueError(f"pattern must be C/I, got {ch!r}")
    return Session(index=index, trials=tuple(trials))


def session_from_bits(bits, index=1):
    pattern = "".join("C" if b else "I" for b in bits)
    return session_from_outcomes(pattern, index=index)


def random_session(rng, length, index=1, p=0.5):
    return session_from_bits(rng.random(length) < p, index=index)


@pytest.fixture(params=backend.available_backends())
def each_backend(request):
    previous = backend.set_backend(request.param)
    yield request.param
    backend.set_backend(previous)


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(12345))


@pytest.fixture
def quick_protocol():
    """A small session grid so io/cli tests stay fast."""
    return ProtocolConfig(trials_per_session=40)
