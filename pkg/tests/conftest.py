import numpy as np
import pytest

from tankfdi.experiment import CALIBRATION_ENDPOINTS, FDI_DIFFERENTIATOR, calibrate
from tankfdi.control import TrajectorySpec
from tankfdi.faults import NoiseConfig
from tankfdi.plant import InputVector, PlantState, dynamics, level_acceleration
from tankfdi.simulation import Scenario, simulate


def exact_jets(trace, params):
    """Levels with their exact first and second derivatives at each sample.

    The derivatives are taken just after the sample instant, where the
    input held over the next period applies.
    """
    n = len(trace)
    xd, xdd = np.empty((n, 3)), np.empty((n, 3))
    for k in range(n):
        s = PlantState(*trace.x[k])
        u = InputVector(*trace.u_applied[k])
        xd[k] = dynamics(s, u, params)
        xdd[k] = level_acceleration(s, u, params)
    return trace.x, xd, xdd


@pytest.fixture(scope="session")
def nominal_trace():
    sc = Scenario(noise=NoiseConfig(0.0))
    return sc, simulate(sc, record_fine=True)


def calibration_scenarios(flat_outputs=("Z1", "Z2")):
    return [Scenario(name=f"calibration_{i + 1}", trajectory=TrajectorySpec(z_final=zf),
                     noise=NoiseConfig(5e-4, 101 + i), differentiator=FDI_DIFFERENTIATOR,
                     flat_outputs=flat_outputs)
            for i, zf in enumerate(CALIBRATION_ENDPOINTS)]


@pytest.fixture(scope="session")
def thresholds():
    return calibrate(calibration_scenarios())
