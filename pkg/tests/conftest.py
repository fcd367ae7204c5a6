import numpy as np
import pytest

from iqsim.baths import BathSpec
from iqsim.sectors import TwoQubitParams


@pytest.fixture
def rng():
    return np.random.default_rng(20240809)


@pytest.fixture
def small_params():
    """Fig-1-style parameters at oracle-friendly N."""
    bath = BathSpec(N=4, s=0.5, f=1.0, beta=1.0 / 0.3)
    return TwoQubitParams(omega1=1.2, omega2=0.8, J=0.5,
                          bath1=bath, bath2=bath)


def random_bath(rng, N, beta_range=(0.3, 4.0)):
    return BathSpec(N=N, s=float(rng.uniform(0.2, 1.0)),
                    f=float(rng.uniform(0.5, 1.5)),
                    beta=float(rng.uniform(*beta_range)))


def random_two_qubit(rng, N, **shared):
    return TwoQubitParams(
        omega1=float(rng.uniform(0.3, 2.5)),
        omega2=float(rng.uniform(0.3, 2.5)),
        J=float(rng.uniform(0.0, 1.2)),
        bath1=shared.get("bath1") or random_bath(rng, N),
        bath2=shared.get("bath2") or random_bath(rng, N),
    )


def random_density(rng, dim):
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = m @ m.conj().T
    return rho / np.trace(rho)
