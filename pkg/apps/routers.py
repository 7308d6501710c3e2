from apps.stable_kernel.views import kernel_router
from apps.solver.views import solve_router
from apps.mc_oracle.views import simulate_router
from apps.verifier.views import verify_router

COMMANDS = [
    kernel_router,
    solve_router,
    simulate_router,
    verify_router,
]
