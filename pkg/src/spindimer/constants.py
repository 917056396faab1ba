"""Unit conventions and physical constants.

The whole library works in the magnetometry unit system of the modelled
compounds: temperatures and exchange couplings (quoted as J/k_B) in kelvin,
molar susceptibility chi in mu_B FU^-1 Oe^-1 (Bohr magnetons per formula
unit per oersted), Lande g-factors dimensionless.  The only physical
constant that then enters anywhere is the ratio mu_B/k_B.

The dimensionless "reduced" susceptibility

    x = k_B T chi / (g mu_B)^2 = T chi / (g^2 * MU_B_OVER_K_B)

is what the entanglement quantities are built from; the helpers below
convert between the two representations.
"""

# CODATA Bohr magneton over Boltzmann constant, in K/Oe.
MU_B_OVER_K_B = 6.71714e-5


def reduced_susceptibility(chi, temperature, g):
    """Dimensionless x = k_B T chi / (g mu_B)^2 for chi in mu_B FU^-1 Oe^-1."""
    return temperature * chi / (g * g * MU_B_OVER_K_B)


def susceptibility_from_reduced(x, temperature, g):
    """Inverse of :func:`reduced_susceptibility`."""
    return g * g * MU_B_OVER_K_B * x / temperature
