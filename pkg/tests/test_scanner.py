import json

import pytest
from hypothesis import given, settings, strategies as st

from primesums.errors import DigestMismatchError, DomainError
from primesums.prime_sums import Variant, term
from primesums.scanner import (
    Checkpoint, PrimeHit, first_prime_indices, hits_digest, pi_counts, read_hits_csv, resume, scan,
    write_hits_csv,
)

from oracles import brute_hits, is_prime_td, primes_td


def as_tuples(hits):
    return [(h.k, h.m, h.q) for h in hits]


def test_first_hits():
    hits = scan("plain", 10).hits
    assert as_tuples(hits) == [(1, 1, 5), (2, 2, 17), (3, 3, 41), (4, 6, 197), (5, 7, 281)]


def test_matches_brute_force_oracle():
    assert as_tuples(scan("plain", 3000, block=700).hits) == brute_hits(3000)


@pytest.mark.parametrize("shift", [1, 4])
def test_shifted_matches_oracle(shift):
    assert as_tuples(scan(Variant("shifted", shift), 800).hits) == brute_hits(800, shift=shift)


def test_offset_variant():
    ps = primes_td(400)
    expect = [n for n in range(1, 201) if is_prime_td(6 + sum(ps[:2 * n]))]
    assert [h.m for h in scan("offset:3", 200).hits] == expect


def test_pi_rows():
    res = scan("plain", 1000, [10, 100, 1000])
    assert [(r.n, r.pi_n) for r in res.rows] == [(10, 5), (100, 23), (1000, 141)]
    assert res.rows[0].q_max == 281 and res.rows[0].m_of_q_max == 7
    c = pi_counts(res.hits, 10)
    assert c[1:].tolist() == [1, 2, 3, 3, 3, 4, 5, 5, 5, 5]
    with pytest.raises(DomainError):
        scan("plain", 10, [11])


@settings(max_examples=10, deadline=None)
@given(st.integers(1, 1500), st.integers(1, 1500))
def test_prefix_embedding(a, b):
    lo, hi = sorted((a, b))
    small, big = scan("plain", lo).hits, scan("plain", hi).hits
    assert big[:len(small)] == small
    assert all(h.m > lo for h in big[len(small):])


def test_first_prime_indices():
    assert first_prime_indices(96) == [1, 2, 4, 6, 12, 14, 60, 64, 96]


def test_workers_and_blocks_do_not_change_hits():
    base = scan("plain", 20_000).hits
    assert scan("plain", 20_000, workers=3, block=1_500).hits == base


def test_checkpoint_roundtrip_and_resume(tmp_path):
    seen = []
    full = scan("plain", 5000, cadence=1000, on_checkpoint=lambda cp, h: seen.append((cp, list(h))))
    assert [cp.n_last for cp, _ in seen] == [1000, 2000, 3000, 4000, 5000]
    cp, prior = seen[1]
    assert cp.accumulator == term(Variant(), 2000)
    path = tmp_path / "cp.json"
    cp.save(path)
    text = path.read_text()
    assert all(isinstance(v, str) for v in json.loads(text).values())
    loaded = Checkpoint.load(path)
    assert loaded == cp
    assert resume(loaded, 5000, prior).hits == full.hits


def test_resume_rejects_tampering():
    seen = []
    scan("plain", 3000, cadence=1000, on_checkpoint=lambda cp, h: seen.append((cp, list(h))))
    cp, prior = seen[0]
    with pytest.raises(DigestMismatchError):
        resume(cp, 3000, prior[:-1])
    forged = [PrimeHit(h.k, h.m, h.q + 2) if i == 0 else h for i, h in enumerate(prior)]
    with pytest.raises(DigestMismatchError):
        resume(cp, 3000, forged)
    bad_acc = Checkpoint(cp.variant, cp.n_last, cp.accumulator + 1, cp.hits_so_far, cp.digest)
    with pytest.raises(DigestMismatchError):
        resume(bad_acc, 3000, prior)
    with pytest.raises(DigestMismatchError):
        Checkpoint.from_json('{"variant": "plain"}')


def test_digest_is_order_sensitive():
    a, b = PrimeHit(1, 1, 5), PrimeHit(2, 2, 17)
    assert hits_digest([a, b]) != hits_digest([b, a])
    assert hits_digest([]) == 0xCBF29CE484222325


def test_hits_csv_roundtrip(tmp_path):
    hits = scan("plain", 500).hits
    p = tmp_path / "h.csv"
    text = write_hits_csv(hits, p)
    assert text.splitlines()[0] == "m,k,q"
    assert read_hits_csv(p) == hits
    (tmp_path / "bad.csv").write_text("k,m,q\n1,1,5\n")
    with pytest.raises(DomainError):
        read_hits_csv(tmp_path / "bad.csv")
