"""Physical constants and unit conversions (atomic units throughout)."""

#: 1 atomic unit of time in femtoseconds.
AU_TIME_FS = 0.02418884

#: Boltzmann constant in hartree per kelvin.
KB_HARTREE_PER_K = 3.166811563e-6


def kelvin_to_hartree(temperature):
    return temperature * KB_HARTREE_PER_K


def au_to_fs(t):
    return t * AU_TIME_FS


def fs_to_au(t):
    return t / AU_TIME_FS
