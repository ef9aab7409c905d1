import numpy as np
import pytest

from rotorpower import AirframeParams, reference_quadrotor


@pytest.fixture
def quad() -> AirframeParams:
    """Stock 20 N quadrotor simulation parameter set."""
    return reference_quadrotor()


def random_params(rng: np.random.Generator) -> AirframeParams:
    """A random but physically sensible airframe; v0 derived."""
    return AirframeParams(
        n=int(rng.choice([4, 6, 8, 10, 12])),
        weight_w=float(rng.uniform(2.0, 100.0)),
        rho=float(rng.uniform(0.9, 1.4)),
        disc_area_a=float(rng.uniform(0.05, 1.0)),
        solidity_s=float(rng.uniform(0.02, 0.2)),
        profile_drag_delta=float(rng.uniform(0.005, 0.05)),
        induced_correction_k=float(rng.uniform(0.0, 0.5)),
        thrust_coeff_ct=float(rng.uniform(5e-4, 5e-3)),
        rotor_radius_r=float(rng.uniform(0.1, 0.5)),
        s_fp_par=float(rng.uniform(0.001, 0.1)),
        s_fp_perp=float(rng.uniform(0.05, 1.0)),
    )
