"""Inverse scattering laboratory for the modified Camassa-Holm equation (kappa = 2)."""
