"""Primes among sums of consecutive primes.

Exact prime sums, a resumable scanner for their prime terms, analytic
companions (M_k, root equations, li), inequality checkers, and a command line
that regenerates the reference tables.
"""
from .errors import (CapacityError, DigestMismatchError, DomainError, InsufficientDataError,
                     NoRootError, OutOfProvenRangeError, PrimeSumsError)
from .primes import (PrimalityVerdict, PrimeTable, is_prime, miller_rabin, nth_prime,
                     prime_count_between, sieve_primes)
from .prime_sums import SumState, Variant, prefix_sums, s, s_prime, stream, term, terms
from .scanner import (Checkpoint, PiCheckpointRow, PrimeHit, ScanResult, first_prime_indices,
                      read_hits_csv, resume, scan, write_hits_csv)
from .analysis import (companion_b, euler_phi, li, mk_refined, mk_upper, monotonicity_scan,
                       omega_34, omega_ad, q_diagnostics, root_k0, root_k1, root_k2, series_partial,
                       solve_mk, t_seq, table5_ratios, tprime_seq, v_seq, vprime_seq)
from .bounds import (BoundCheck, Status, check_dusart_interval, check_dusart_pn,
                     check_hassani, check_hit_conjectures, check_mandl, check_pi_conjectures,
                     check_prop312, check_prop315, check_robin, check_sun_lower)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
