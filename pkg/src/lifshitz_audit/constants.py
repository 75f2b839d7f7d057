"""Physical constants (CODATA 2018), SI units.

Values are pinned here rather than taken from :mod:`scipy.constants` so that
golden numbers do not drift when scipy moves to a newer CODATA release.
"""

CONSTANTS_SET = "CODATA-2018"

#: elementary charge, C (exact)
e = 1.602176634e-19
#: Planck constant, J s (exact)
h = 6.62607015e-34
#: reduced Planck constant, J s
hbar = h / (2.0 * 3.141592653589793)
#: Boltzmann constant, J/K (exact)
k_B = 1.380649e-23
#: speed of light, m/s (exact)
c = 299792458.0
#: vacuum permittivity, F/m
eps_vac = 8.8541878128e-12
#: electron mass, kg
m_e = 9.1093837015e-31

#: one electronvolt expressed as an angular frequency, rad/s
EV_TO_RAD_S = e / hbar


def ev_to_rad_s(value_ev):
    """Convert an energy in eV to the angular frequency E/hbar."""
    return value_ev * EV_TO_RAD_S


def as_dict():
    return {
        "set": CONSTANTS_SET,
        "e": e,
        "hbar": hbar,
        "k_B": k_B,
        "c": c,
        "eps_vac": eps_vac,
        "m_e": m_e,
    }
