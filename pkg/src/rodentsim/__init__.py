"""Simulated operant-conditioning trainings and behavioral-similarity
metrics for trial-by-trial lick data.

The package has five layers: domain types (:mod:`.model`), the tabular
Q-learner (:mod:`.agent`), the training protocol (:mod:`.protocol`),
similarity metrics over outcome sequences (:mod:`.metrics`), and
persistence plus the command line (:mod:`.io`, :mod:`.cli`). Hot loops
run in a compiled extension when it is available and in pure Python
otherwise; both produce bit-identical results (see :mod:`.backend`).
"""

from .agent import (
    Agent,
    AgentConfig,
    QTable,
    action_distribution,
    epsilon_for_session,
    push_stimulus,
    q_update,
    select_action,
)
from .backend import active_backend, available_backends, set_backend
from .config import MetricsConfig, default_config_toml, load_config
from .errors import (
    InfeasibleConstraintError,
    InsufficientDataError,
    RodentsimError,
    TrialLogError,
    TrialLogIntegrityError,
    TrialLogParseError,
)
from .io import (
    RunRecord,
    emit_figure_data,
    export_trial_log_csv,
    export_trial_log_json,
    import_trial_log,
    load_run_records,
    make_run_record,
    pooled_session_matrix,
    read_trial_log,
    replay_run,
    run_experiment_executions,
    save_run_records,
)
from .metrics import (
    DISTANCES,
    DistanceMatrix,
    GroupSeries,
    ItemLabel,
    WindowedSeries,
    accuracy_curve,
    distance_matrix,
    group_distance,
    group_series,
    individual_distance,
    match_distance,
    windowed_series,
)
from .model import (
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
from .protocol import (
    ProtocolConfig,
    generate_stimulus_sequence,
    judge,
    run_session,
    run_training,
    target_response,
)

__version__ = "0.1.0"

__all__ = [
    "Agent", "AgentConfig", "QTable", "action_distribution",
    "epsilon_for_session", "push_stimulus", "q_update", "select_action",
    "active_backend", "available_backends", "set_backend",
    "MetricsConfig", "default_config_toml", "load_config",
    "InfeasibleConstraintError", "InsufficientDataError", "RodentsimError",
    "TrialLogError", "TrialLogIntegrityError", "TrialLogParseError",
    "RunRecord", "emit_figure_data", "export_trial_log_csv",
    "export_trial_log_json", "import_trial_log", "load_run_records",
    "make_run_record", "pooled_session_matrix", "read_trial_log",
    "replay_run", "run_experiment_executions", "save_run_records",
    "DISTANCES", "DistanceMatrix", "GroupSeries", "ItemLabel",
    "WindowedSeries", "accuracy_curve", "distance_matrix", "group_distance",
    "group_series", "individual_distance", "match_distance",
    "windowed_series",
    "Category", "Cohort", "Outcome", "Response", "Session", "Stimulus",
    "TrainingSequence", "Trial", "accuracy", "check_success",
    "sessions_to_criterion",
    "ProtocolConfig", "generate_stimulus_sequence", "judge", "run_session",
    "run_training", "target_response",
    "__version__",
]
