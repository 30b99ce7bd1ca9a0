from mixcone.dynamics.damped import (
    PhasePoint,
    damped_flow,
    lyapunov_speed_trace,
    motion_reversal_defect,
    time_inversion,
)
from mixcone.dynamics.fokker_planck import DensityGrid, fokker_planck_step, relaxation_run, stationary_masses
from mixcone.dynamics.shift import ShiftState, shift_map, shift_surjectivity_witness
