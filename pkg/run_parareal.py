# %%
from src import PhaseState, PropagatorPair, TwoLevelGrid, builtin_scheme, convergence_report, make_system, run
from src.parareal import compare_coarse_choices, matched_coarse
#%%
SYSTEM = "spin-orbit"  # harmonic, pendulum, spin-orbit
PARAMS = dict(epsilon=0.1, alpha=0.01, theta=0.2)
FINE = "yoshida8"  # fine scheme, also the matched coarse scheme
FINE_STEP = 1 / 128
COARSE_STEP = 1.0
T_END = 32.0
Q0, P0 = 0.8, 0.0
TOL = 1e-10
THREADS = 8  # concurrent fine branches

system = make_system(SYSTEM, **PARAMS)
grid = TwoLevelGrid.from_steps(FINE_STEP, COARSE_STEP, T_END)
fine = builtin_scheme(FINE)
y0 = PhaseState([Q0], [P0])
print(grid.summary())
# %%
result = run(PropagatorPair.matched(fine, grid), system, y0, grid, tol=TOL, threads=THREADS, show_progress=True)
report = convergence_report(result, system)
print(f"converged_at={result.converged_at} ({result.converged_by}), surrogate length {report.surrogate_length:.3e}")
report.to_frame()
# %%
table = compare_coarse_choices(
    fine,
    [matched_coarse(fine, grid), builtin_scheme("lie-trotter")],
    system, y0, grid,
    tol=1e-8,
    threads=THREADS,
    show_progress=True,
)
for row in table.rows:
    print(f"{row.label:>20}: converged_at={row.converged_at}, final defect {row.final_defect:.3e}")
#%%
