"""Hyperelliptic-ensemble L-function statistics and USp kernel predictions."""

from ._hyperell import (
    a_value,
    avg_nlevel,
    avg_p_exact,
    eigenphases,
    is_squarefree,
    jacobi,
    kernel_integral,
    l_star,
    linear_stat_single,
    mobius_mu,
    prime_count,
    primes_of_degree,
    rmt_empirical,
    run_verify_suite,
    s_brute,
    scaled_traces,
    sigma_sum,
)

__all__ = [
    "a_value",
    "avg_nlevel",
    "avg_p_exact",
    "eigenphases",
    "is_squarefree",
    "jacobi",
    "kernel_integral",
    "l_star",
    "linear_stat_single",
    "mobius_mu",
    "prime_count",
    "primes_of_degree",
    "rmt_empirical",
    "run_verify_suite",
    "s_brute",
    "scaled_traces",
    "sigma_sum",
]
