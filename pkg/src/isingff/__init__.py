"""Exact series, differential-operator and quadrature routes to the diagonal
form factors f^(j)_{N,N} and the lambda-extended correlations of the
two-dimensional Ising model."""
from .algebra import BigRat, RatFunc, rat, rat_str
from .diffops import OreOp, apply, build, right_divide, scale_limit, sym_power
from .formfactor import ek_table, ek_to_series, f2_nested_series, toeplitz_corr_low
from .painleve import formfactor_series, lambda_coefficient, solve_regime
from .quadrature import ff_phi_integral, ff_t_integral, mc_f4
from .series import HalfSeries

__version__ = "0.1.0"

__all__ = [
    "BigRat", "RatFunc", "rat", "rat_str", "HalfSeries",
    "OreOp", "apply", "build", "right_divide", "scale_limit", "sym_power",
    "ek_table", "ek_to_series", "f2_nested_series", "toeplitz_corr_low",
    "formfactor_series", "lambda_coefficient", "solve_regime",
    "ff_phi_integral", "ff_t_integral", "mc_f4",
]
