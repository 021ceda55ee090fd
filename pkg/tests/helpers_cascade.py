import numpy as np

from cascade_clock import CascadeParams, generate_er, simulate_ic


def random_cascade(seed: int, n: int = 40, p: float = 0.15, p_n: float = 0.3,
                   p_e: float = 0.0, max_steps: int = 6):
    """Small seeded ER cascade for property tests."""
    rng = np.random.default_rng(seed)
    g = generate_er(n, p, int(rng.integers(2**63)))
    s0 = {int(rng.integers(n))}
    seq = simulate_ic(g, CascadeParams(p_n, p_e), s0, max_steps, int(rng.integers(2**63)))
    return g, seq
