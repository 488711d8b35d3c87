from .config import ExperimentConfig, load_config, preset, step_grid
from .studies import PhaseMap, SuccessCurve, run_comparison, run_phase_transition, run_phase_transitions, transition_point
from .trials import success
from .outputs import write_outputs
