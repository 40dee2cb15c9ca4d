import numpy as np
import pytest

from torusenergy.potentials import (
    BumpPerturbedPotential,
    GaussianPotential,
    PaleyWienerPotential,
    SmoothedInverseSquarePotential,
)

# the four named families with the parameter choices the tests standardize on
FAMILIES = {
    "gaussian": GaussianPotential(),
    "paley_wiener": PaleyWienerPotential(4, 2 * np.pi),
    "bump_perturbed": BumpPerturbedPotential(10),
    "smoothed_inverse_square": SmoothedInverseSquarePotential(),
}


@pytest.fixture(params=sorted(FAMILIES), ids=sorted(FAMILIES))
def family(request):
    return FAMILIES[request.param]


@pytest.fixture
def gaussian():
    return FAMILIES["gaussian"]
