"""Social-learning data fusion for sensor networks under Byzantine falsification."""

__version__ = "0.1.0"

from .adversary import AttackPlan, Strategy, forced_emission, plan_attack
from .engine import RawResults, RunConfig, Trace, monte_carlo, run_trace
from .fusion import FusionState, cascade_threshold, decide, honest_emission_prob, increment, social_loglik
from .metrics import NodeStats, asymptotic_sweep, md_fa_curves, worst_decile_curve
from .sensor import SensorSpec, SignalModel, detection_prob, loglik_cdf, sample_signal, signal_loglik

__all__ = [
    "AttackPlan", "Strategy", "forced_emission", "plan_attack",
    "RawResults", "RunConfig", "Trace", "monte_carlo", "run_trace",
    "FusionState", "cascade_threshold", "decide", "honest_emission_prob", "increment", "social_loglik",
    "NodeStats", "asymptotic_sweep", "md_fa_curves", "worst_decile_curve",
    "SensorSpec", "SignalModel", "detection_prob", "loglik_cdf", "sample_signal", "signal_loglik",
]
