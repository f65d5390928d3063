"""Stop a long scan half way and pick it up again.

The checkpoint stores the last index, the running sum and an FNV-1a digest of
the hits found so far, so a resumed run can refuse a tampered hit file.
"""
import tempfile
from pathlib import Path

from primesums.scanner import Checkpoint, read_hits_csv, resume, scan, write_hits_csv

N = 200_000
work = Path(tempfile.mkdtemp())


def save(cp, hits):
    write_hits_csv(hits, work / "hits.csv")
    cp.save(work / "cp.json")


# pretend the machine went down after 80000 indices
scan("plain", 80_000, cadence=20_000, on_checkpoint=save)
cp = Checkpoint.load(work / "cp.json")
print("checkpoint:", (work / "cp.json").read_text().strip())

prior = read_hits_csv(work / "hits.csv")[:cp.hits_so_far]
resumed = resume(cp, N, prior).hits
cold = scan("plain", N, workers=2).hits
print(f"resumed run: {len(resumed)} hits, identical to cold run: {resumed == cold}")
