"""Round orchestration: parameters, behaviors, simulation, load accounting."""

from .accounting import Ledger, LoadReport, Loads, Message, account_loads, brea_loads, theoretical_loads
from .behaviors import HONEST, Kind, UserBehavior, dropout, parse_behavior
from .config import Scenario, load_scenario, parse_scenario
from .params import BoundCheck, ProtocolParams, check_bounds, k_max, n_star, validate_params
from .report import report_to_dict, report_to_json
from .simulator import RoundReport, run_round

__all__ = [
    "HONEST", "BoundCheck", "Kind", "Ledger", "LoadReport", "Loads", "Message", "ProtocolParams",
    "RoundReport", "Scenario", "UserBehavior", "account_loads", "brea_loads", "check_bounds",
    "dropout", "k_max", "load_scenario", "n_star", "parse_behavior", "parse_scenario",
    "report_to_dict", "report_to_json", "run_round", "theoretical_loads", "validate_params",
]
