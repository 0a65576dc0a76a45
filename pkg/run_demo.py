#!/usr/bin/env python3
"""
Demo runner script that regenerates every figure dataset into figures/.
Each dataset is one CLI invocation, so the files match what a user gets by hand.
"""

import sys
import time
from pathlib import Path

from harmonic_chain.main import run

FIGURES_DIR = Path("figures")

# (file name, description, argv without --output)
DATASETS = [
    ("oscillator_crossover.csv", "Single oscillator quantum-classical crossover",
     ["crossover", "--eta-max", "2.0", "--eta-steps", "201"]),
    ("profile_n1000.csv", "Ground state fluctuations, N = 1000",
     ["fluct", "--n", "1000", "--alpha", "1.0"]),
    ("profile_n950.csv", "Ground state fluctuations, N = 950",
     ["fluct", "--n", "950", "--alpha", "1.0"]),
    ("profile_n1000_linearized.csv", "Ground state fluctuations, linearized dispersion",
     ["fluct", "--n", "1000", "--alpha", "1.0", "--dispersion", "linearized"]),
    ("profile_classical.csv", "Classical fluctuations, eta_cl = 1",
     ["fluct", "--n", "1000", "--classical", "--eta-cl", "1.0"]),
    ("density_alpha0.01.csv", "Right end density, alpha = 0.01",
     ["density", "--n", "90000", "--alpha", "0.01"]),
    ("density_alpha0.1.csv", "Right end density, alpha = 0.1",
     ["density", "--n", "90000", "--alpha", "0.1"]),
    ("profile_eta0.0025.csv", "Finite temperature crossover, eta = 0.0025",
     ["fluct", "--n", "1000", "--alpha", "1.0", "--eta", "0.0025"]),
    ("profile_eta0.01.csv", "Finite temperature crossover, eta = 0.01",
     ["fluct", "--n", "1000", "--alpha", "1.0", "--eta", "0.01"]),
    ("sq_exact.json", "Structure factor, alpha = 0.02, eta_cl = 0.001, exact pairs",
     ["sq", "--n", "1000", "--alpha", "0.02", "--eta-cl", "0.001", "--q-min", "0.5", "--q-max", "9.42",
      "--q-steps", "500", "--format", "json"]),
    ("sq_bulk.json", "Structure factor, alpha = 0.02, eta_cl = 0.001, bulk pairs",
     ["sq", "--n", "1000", "--alpha", "0.02", "--eta-cl", "0.001", "--q-min", "0.5", "--q-max", "9.42",
      "--q-steps", "500", "--method", "bulk", "--format", "json"]),
    ("sq_classical_0.001.csv", "Classical structure factor, eta_cl = 0.001",
     ["sq", "--n", "1000", "--classical", "--eta-cl", "0.001", "--q-min", "0.5", "--q-max", "9.42",
      "--q-steps", "500", "--method", "bulk"]),
    ("sq_classical_0.01.csv", "Classical structure factor, eta_cl = 0.01",
     ["sq", "--n", "1000", "--classical", "--eta-cl", "0.01", "--q-min", "0.5", "--q-max", "9.42",
      "--q-steps", "500", "--method", "bulk"]),
    ("bragg_exponents.csv", "Bragg peak exponents, alpha = 0.02",
     ["bragg", "--alpha", "0.02", "--nu", "1", "2", "3"]),
    ("moessbauer.csv", "Recoilless emission probability, alpha = 0.02",
     ["moessbauer", "--n", "1000", "--alpha", "0.02"]),
]


def main():
    print("🚀 Harmonic Chain - Figure Data Generator")
    print("=" * 50)

    FIGURES_DIR.mkdir(exist_ok=True)
    failures = 0
    total_start_time = time.time()

    for name, description, argv in DATASETS:
        target = FIGURES_DIR / name
        print(f"📈 {description}")
        start_time = time.time()
        code = run(argv + ["--output", str(target)])
        elapsed = time.time() - start_time

        if code == 0:
            print(f"   ✅ {target} ({elapsed:.2f}s)")
        else:
            print(f"   ❌ exit code {code} ({elapsed:.2f}s)")
            failures += 1

    print("=" * 50)
    print(f"⏱️  Total time: {time.time() - total_start_time:.2f}s")
    if failures:
        print(f"💥 {failures} dataset(s) failed")
        return 1
    print(f"🎉 All {len(DATASETS)} datasets written to {FIGURES_DIR}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
