import numpy as np

from .base import SystemSpec

DT = 1e-4
STEPS = 100

OMEGA_BASE = 377.0
INERTIA = 13.0
DAMPING = 0.05
T_D0 = 0.131
T_Q0 = 0.0131
X_D = 0.375
SALIENCY = 0.9215
EXCITATION = 4.4933
Q_AXIS = 0.6911


class Generator(SystemSpec):
    """
    Synchronous generator. States: rotor angle, rotor speed deviation, q-axis and
    d-axis transient voltages. Inputs: mechanical torque, field voltage, terminal
    bus voltage. Measures electrical output power.
    """

    __NAME__ = 'generator'

    def __init__(self):
        super().__init__(
            n_x=4, n_m=1, n_u=3,
            steps=STEPS, dt=DT,
            x0_true=[0.4, 0, 0, 0],
            P0=np.diag([1e-4, 1e-10, 1e-4, 1e-4]),
            Q=np.diag([1e-10, 1e-16, 1e-10, 1e-10]))

    def input(self, k):
        return np.array([0.8, 2.11 + 0.0002 * k, 1.002])

    def step_input(self, k):
        # the field voltage ramp is indexed by the step being predicted into
        return self.input(k)

    def f(self, x, u, k):
        x1, x2, x3, x4 = x
        u1, u2, u3 = u
        return np.array([
            x1 + OMEGA_BASE * x2 * DT,
            x2 + DT / INERTIA * (u1 - u3 * x3 * np.sin(x1) / X_D
                                 + SALIENCY * u3 ** 2 * np.sin(2 * x1) - DAMPING * x2),
            x3 + DT / T_D0 * (u2 - x3 - EXCITATION * (x3 - u3 * np.cos(x1))),
            x4 - x4 * DT / T_Q0 + Q_AXIS * u3 * np.sin(x1) * DT / T_Q0,
        ])

    def jac_f(self, x, u, k):
        x1, x2, x3, _ = x
        _, _, u3 = u
        return np.array([
            [1.0, OMEGA_BASE * DT, 0.0, 0.0],
            [DT / INERTIA * (-u3 * x3 * np.cos(x1) / X_D + 2 * SALIENCY * u3 ** 2 * np.cos(2 * x1)),
             1 - DT * DAMPING / INERTIA,
             -DT / INERTIA * u3 * np.sin(x1) / X_D,
             0.0],
            [-DT / T_D0 * EXCITATION * u3 * np.sin(x1), 0.0, 1 - DT / T_D0 * (1 + EXCITATION), 0.0],
            [Q_AXIS * u3 * np.cos(x1) * DT / T_Q0, 0.0, 0.0, 1 - DT / T_Q0],
        ])

    def hess_f(self, x, u, k):
        x1, _, x3, _ = x
        _, _, u3 = u
        hessians = np.zeros((4, 4, 4))
        hessians[1, 0, 0] = DT / INERTIA * (u3 * x3 * np.sin(x1) / X_D - 4 * SALIENCY * u3 ** 2 * np.sin(2 * x1))
        hessians[1, 0, 2] = hessians[1, 2, 0] = -DT / INERTIA * u3 * np.cos(x1) / X_D
        hessians[2, 0, 0] = -DT / T_D0 * EXCITATION * u3 * np.cos(x1)
        hessians[3, 0, 0] = -Q_AXIS * u3 * np.sin(x1) * DT / T_Q0
        return hessians

    def h(self, x, u, k):
        x1, _, x3, _ = x
        u3 = u[2]
        return np.array([u3 * x3 * np.sin(x1) / X_D + SALIENCY * u3 ** 2 * np.sin(2 * x1)])

    def jac_h(self, x, u, k):
        x1, _, x3, _ = x
        u3 = u[2]
        return np.array([[u3 * x3 * np.cos(x1) / X_D + 2 * SALIENCY * u3 ** 2 * np.cos(2 * x1),
                          0.0,
                          u3 * np.sin(x1) / X_D,
                          0.0]])

    def hess_h(self, x, u, k):
        x1, _, x3, _ = x
        u3 = u[2]
        hessians = np.zeros((1, 4, 4))
        hessians[0, 0, 0] = -u3 * x3 * np.sin(x1) / X_D - 4 * SALIENCY * u3 ** 2 * np.sin(2 * x1)
        hessians[0, 0, 2] = hessians[0, 2, 0] = u3 * np.cos(x1) / X_D
        return hessians


def build_generator() -> Generator:
    return Generator()
