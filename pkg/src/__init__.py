"""
Semilinear blowup lab

Численная лаборатория для разрушения решений фокусирующего полулинейного
волнового уравнения u_tt - u_rr - (2/r) u_r = u^p при нечетных p.
"""

__version__ = "1.0.0"
