"""Fast algorithms for the discrete trigonometric transforms as sparse matrix formulas."""
from .formula import CostTriple, apply, cost, densify, transpose
from .planner import (Plan, Planner, Strategy, closed_form_cost, parse_strategy, plan,
                      plan_cost, resolve, verify_plan)
from .rules import base_case, expand, rewrite
from .transforms import TransformId, dct, dft, dst, reference

__version__ = "0.1.0"
