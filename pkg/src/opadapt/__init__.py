"""Real-coded evolutionary optimizer with feedback-adaptive operator probabilities."""
from .objectives import PROBLEMS, evaluate, get_problem, is_solved
from .operators import OPERATORS, get_operator

__version__ = "0.1.0"

__all__ = ["PROBLEMS", "OPERATORS", "evaluate", "get_problem", "get_operator", "is_solved"]
