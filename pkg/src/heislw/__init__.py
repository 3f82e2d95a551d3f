"""Loomis-Whitney type inequalities on the finite Heisenberg groups H^n(F_q)."""
from .field import FieldCtx, field_create, field_for_order
from .group import HeisenbergGroup
from .sets import HSubset

__all__ = ["FieldCtx", "field_create", "field_for_order", "HeisenbergGroup", "HSubset"]
__version__ = "0.1.0"
