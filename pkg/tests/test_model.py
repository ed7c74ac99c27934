import numpy as np
import pytest

from rodentsim.model import (
    Category,
    Cohort,
    Outcome,
    Response,
    Session,
    Stimulus,
    TrainingSequence,
    Trial,
    accuracy,
    check_success,
    sessions_to_criterion,
)

from conftest import session_from_outcomes


def test_stimulus_codes_and_labels():
    assert [int(s) for s in Stimulus] == [0, 1, 2, 3]
    assert [s.label for s in Stimulus] == ["sweet", "sweet_55", "salt_55",
                                           "salt"]
    for s in Stimulus:
        assert Stimulus.from_label(s.label) is s
    with pytest.raises(ValueError, match="unknown stimulus"):
        Stimulus.from_label("sour")


def test_stimulus_categories():
    assert Stimulus.SWEET.category is Category.SWEET
    assert Stimulus.SWEET_55.category is Category.SWEET
    assert Stimulus.SALT_55.category is Category.SALT
    assert Stimulus.SALT.category is Category.SALT


def test_response_and_outcome_labels():
    assert [r.label for r in Response] == ["left", "right", "none"]
    assert Response.from_label("none") is Response.NONE
    assert Outcome.from_label("correct") is Outcome.CORRECT
    assert int(Outcome.CORRECT) == 1 and int(Outcome.INCORRECT) == 0
    with pytest.raises(ValueError):
        Response.from_label("middle")
    with pytest.raises(ValueError):
        Outcome.from_label("maybe")


def test_session_validation():
    trial = Trial(Stimulus.SWEET, Response.LEFT, Outcome.CORRECT)
    with pytest.raises(ValueError, match="session index"):
        Session(index=0, trials=(trial,))
    with pytest.raises(ValueError, match="at least one trial"):
        Session(index=1, trials=())
    s = Session(index=2, trials=(trial, trial))
    assert len(s) == 2


def test_session_code_arrays():
    s = session_from_outcomes("CIC")
    assert s.outcome_codes.tolist() == [1, 0, 1]
    assert s.outcome_codes.dtype == np.uint8
    assert s.stimulus_codes.tolist() == [0, 0, 0]
    assert s.response_codes.tolist() == [0, 1, 0]


def test_training_sequence_requires_consecutive_indices():
    s1 = session_from_outcomes("C", index=1)
    s3 = session_from_outcomes("C", index=3)
    with pytest.raises(ValueError, match="consecutive"):
        TrainingSequence("sim:1", (s1, s3), trained=False)


def test_training_sequence_success_fields():
    s1 = session_from_outcomes("C", index=1)
    s2 = session_from_outcomes("C", index=2)
    ts = TrainingSequence("sim:1", (s1, s2), trained=True,
                          sessions_to_criterion=2)
    assert ts.session(2) is s2
    with pytest.raises(KeyError):
        ts.session(3)
    with pytest.raises(ValueError, match="sessions_to_criterion"):
        TrainingSequence("sim:1", (s1, s2), trained=True,
                         sessions_to_criterion=5)
    with pytest.raises(ValueError, match="untrained"):
        TrainingSequence("sim:1", (s1, s2), trained=False,
                         sessions_to_criterion=1)


def test_cohort_lookup():
    ts = TrainingSequence("sim:7", (session_from_outcomes("CC"),),
                          trained=False)
    cohort = Cohort(members=(ts,))
    assert cohort.member("sim:7") is ts
    with pytest.raises(KeyError):
        cohort.member("sim:8")
    with pytest.raises(ValueError):
        Cohort(members=())


def test_accuracy_counts_correct_fraction():
    assert accuracy(session_from_outcomes("CCIC")) == 0.75
    assert accuracy(session_from_outcomes("IIII")) == 0.0
    assert accuracy(session_from_outcomes("C")) == 1.0


def test_check_success_inclusive_threshold():
    # exactly at threshold counts
    assert check_success([0.7, 0.7, 0.7], threshold=0.7, window=3)
    assert not check_success([0.7, 0.69, 0.7, 0.7], threshold=0.7, window=3)
    assert check_success([0.1, 0.8, 0.9, 0.75], threshold=0.7, window=3)


def test_sessions_to_criterion_marks_end_of_first_run():
    accs = [0.5, 0.8, 0.8, 0.8, 0.9]
    assert sessions_to_criterion(accs, 0.7, 3) == 4
    assert sessions_to_criterion([0.9, 0.9], 0.7, 3) is None
    assert sessions_to_criterion([], 0.7, 3) is None
    assert sessions_to_criterion([0.5, 0.9], 0.7, 1) == 2
    with pytest.raises(ValueError):
        sessions_to_criterion([0.5], 0.7, 0)
