#!/usr/bin/env python3
"""Generate the frozen measurement fixtures used by the test suite.

Raw integer aggregates are constructed by analytic inversion: pick elapsed
time and the target value of every efficiency factor, then derive the time
pools bottom-up (o_max from communication efficiency, the non-MPI pool from
load balance, the serialization/scheduling pools and useful time from the
OpenMP factors, finally cycles and instructions from frequency and IPC).

Every generated column is then verified FORWARD with formulas local to this
script (independent of the package under test) against the published
reference cells, including the two-decimal display strings, before anything
is written. Run from the repository root:

    python tools/gen_fixtures.py
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
DATA_DIR = ROOT / "tests" / "data"


# ----------------------------------------------------------------------------
# inversion + independent forward evaluation


@dataclass
class Profile:
    """Design targets for one region of one run."""

    mpi_comm: float
    mpi_lb: float
    omp_serial: float
    omp_sched: float
    omp_lb: float
    ipc: float
    freq_ghz: float

    @property
    def pe(self) -> float:
        return self.mpi_lb * self.mpi_comm * self.omp_serial * self.omp_sched * self.omp_lb


def invert(total_cpus: int, elapsed_ns: int, p: Profile) -> dict:
    """Raw integer aggregates whose derived metrics hit the profile targets."""
    total = total_cpus * elapsed_ns
    o_max = round(p.mpi_comm * elapsed_ns)
    non_mpi = round(p.mpi_lb * o_max * total_cpus)
    after_serial = round(p.omp_serial * non_mpi)
    after_sched = round(p.omp_sched * after_serial)
    useful = round(p.omp_lb * after_sched)
    cycles = round(p.freq_ghz * useful)
    instructions = round(p.ipc * cycles)
    return {
        "elapsed_ns": elapsed_ns,
        "useful_cpu_ns": useful,
        "mpi_cpu_ns": total - non_mpi,
        "omp_serialization_cpu_ns": non_mpi - after_serial,
        "omp_scheduling_cpu_ns": after_serial - after_sched,
        "max_non_mpi_rank_ns": o_max,
        "instructions": instructions,
        "cycles": cycles,
    }


def elapsed_for_instructions(total_cpus: int, p: Profile, instructions: float) -> int:
    """Elapsed time that makes the inverted region retire ~`instructions`."""
    useful = instructions / (p.ipc * p.freq_ghz)
    return round(useful / (p.pe * total_cpus))


def forward(fields: dict, total_cpus: int) -> dict:
    """Derived metrics, written out independently of the package under test."""
    elapsed = fields["elapsed_ns"]
    total = total_cpus * elapsed
    non_mpi = total - fields["mpi_cpu_ns"]
    after_serial = non_mpi - fields["omp_serialization_cpu_ns"]
    after_sched = after_serial - fields["omp_scheduling_cpu_ns"]
    useful = fields["useful_cpu_ns"]
    o_max = fields["max_non_mpi_rank_ns"]
    o_avg = non_mpi / total_cpus
    return {
        "pe": useful / total,
        "mpi_pe": non_mpi / total,
        "mpi_lb": o_avg / o_max,
        "mpi_comm": o_max / elapsed,
        "omp_pe": useful / non_mpi,
        "omp_lb": useful / after_sched,
        "omp_sched": after_sched / after_serial,
        "omp_serial": after_serial / non_mpi,
        "ipc": fields["instructions"] / fields["cycles"],
        "freq": fields["cycles"] / useful,
        "instructions": fields["instructions"],
    }


def check_consistency(fields: dict, total_cpus: int) -> None:
    total = total_cpus * fields["elapsed_ns"]
    pools = (
        fields["useful_cpu_ns"]
        + fields["mpi_cpu_ns"]
        + fields["omp_serialization_cpu_ns"]
        + fields["omp_scheduling_cpu_ns"]
    )
    assert pools <= total, "pool sum exceeds total CPU time"
    non_mpi = total - fields["mpi_cpu_ns"]
    assert non_mpi <= fields["max_non_mpi_rank_ns"] * total_cpus, "o_avg above o_max"
    assert fields["max_non_mpi_rank_ns"] <= fields["elapsed_ns"], "o_max above elapsed"
    assert min(fields.values()) >= 0 and fields["useful_cpu_ns"] > 0


def two_decimals(value: float) -> str:
    return str(Decimal(str(value)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


def expect(name: str, actual: float, target: float, tolerance: float) -> None:
    if abs(actual - target) > tolerance:
        sys.exit(f"DESIGN ERROR {name}: {actual:.6f} vs target {target} (tol {tolerance})")
    print(f"  {name:<22} {actual:.6f}  target {target:<6} (off by {abs(actual - target):.2e})")


def expect_display(name: str, actual: float, display: str) -> None:
    if two_decimals(actual) != display:
        sys.exit(f"DESIGN ERROR {name}: {actual:.6f} displays as {two_decimals(actual)}, wanted {display}")
    print(f"  {name:<22} displays {display!r}")


# ----------------------------------------------------------------------------
# document assembly


def region_doc(name: str, fields: dict) -> dict:
    return {"name": name, **fields}


def run_doc(
    timestamp: str,
    mpi_ranks: int,
    omp_threads: int,
    regions: list[dict],
    git: tuple[str, str, str] | None = None,
) -> dict:
    doc: dict = {
        "schema_version": 1,
        "run_timestamp": timestamp,
        "resources": {"mpi_ranks": mpi_ranks, "omp_threads": omp_threads},
    }
    if git is not None:
        short, branch, committed = git
        doc["git"] = {
            "commit_hash": short + "0" * (40 - len(short)),
            "branch": branch,
            "commit_timestamp": committed,
        }
    doc["regions"] = regions
    return doc


def write(path: Path, doc: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    print(f"  wrote {path.relative_to(ROOT)}")


def subregions(total_cpus: int, elapsed_ns: int, base: Profile) -> list[dict]:
    """Two instrumented sub-regions alongside Global: initialize and timestep."""
    init = Profile(
        mpi_comm=min(1.0, base.mpi_comm + 0.004),
        mpi_lb=max(0.5, base.mpi_lb - 0.02),
        omp_serial=max(0.5, base.omp_serial - 0.05),
        omp_sched=base.omp_sched,
        omp_lb=max(0.5, base.omp_lb - 0.01),
        ipc=base.ipc * 0.95,
        freq_ghz=base.freq_ghz,
    )
    step = Profile(
        mpi_comm=base.mpi_comm,
        mpi_lb=min(1.0, base.mpi_lb + 0.003),
        omp_serial=min(1.0, base.omp_serial + 0.02),
        omp_sched=base.omp_sched,
        omp_lb=base.omp_lb,
        ipc=base.ipc * 1.02,
        freq_ghz=base.freq_ghz,
    )
    return [
        region_doc("initialize", invert(total_cpus, round(elapsed_ns * 0.18), init)),
        region_doc("timestep", invert(total_cpus, round(elapsed_ns * 0.72), step)),
    ]


# ----------------------------------------------------------------------------
# acceptance fixtures: strong and weak scaling columns


def build_strong() -> None:
    print("strong_scaling acceptance fixture")
    ranks_ref, threads_ref = 2, 56
    cpus_ref = ranks_ref * threads_ref
    ref = Profile(
        mpi_comm=1.0, mpi_lb=1.0, omp_serial=0.936, omp_sched=0.9863, omp_lb=0.9863,
        ipc=1.40, freq_ghz=2.00,
    )
    elapsed_ref = 125_000_000_000
    fields_ref = invert(cpus_ref, elapsed_ref, ref)
    check_consistency(fields_ref, cpus_ref)
    m_ref = forward(fields_ref, cpus_ref)

    expect("ref PE", m_ref["pe"], 0.91, 0.01)
    expect("ref MPI PE", m_ref["mpi_pe"], 1.00, 1e-9)
    expect("ref OMP LB", m_ref["omp_lb"], 0.99, 0.01)
    expect("ref OMP sched", m_ref["omp_sched"], 0.99, 0.01)
    expect("ref OMP serial", m_ref["omp_serial"], 0.94, 0.01)
    expect_display("ref PE", m_ref["pe"], "0.91")

    ranks_t, threads_t = 4, 56
    cpus_t = ranks_t * threads_t
    ipc_scal, instr_scal, freq_scal = 3.283, 0.993, 0.8785
    target = Profile(
        mpi_comm=1.0, mpi_lb=0.9695, omp_serial=0.68861, omp_sched=0.9695, omp_lb=0.9695,
        ipc=ref.ipc * ipc_scal, freq_ghz=ref.freq_ghz * freq_scal,
    )
    elapsed_t = elapsed_for_instructions(cpus_t, target, m_ref["instructions"] / instr_scal)
    fields_t = invert(cpus_t, elapsed_t, target)
    check_consistency(fields_t, cpus_t)
    m_t = forward(fields_t, cpus_t)

    expect("4x56 PE", m_t["pe"], 0.63, 0.005)
    expect("4x56 MPI PE", m_t["mpi_pe"], 0.96, 0.01)
    expect("4x56 OMP LB", m_t["omp_lb"], 0.96, 0.01)
    expect("4x56 OMP sched", m_t["omp_sched"], 0.96, 0.01)
    expect("4x56 OMP serial", m_t["omp_serial"], 0.68, 0.01)
    a_ipc = m_t["ipc"] / m_ref["ipc"]
    a_freq = m_t["freq"] / m_ref["freq"]
    a_instr = m_ref["instructions"] / m_t["instructions"]  # strong-mode normalization
    a_comp = a_ipc * a_instr * a_freq
    a_global = m_t["pe"] * a_comp
    expect("4x56 IPC scal", a_ipc, 3.28, 0.01)
    expect("4x56 instr scal", a_instr, 0.99, 0.01)
    expect("4x56 freq scal", a_freq, 0.88, 0.01)
    expect("4x56 comp scal", a_comp, 2.85, 0.02)
    expect("4x56 global", a_global, 1.80, 0.02)
    expect_display("4x56 global", a_global, "1.80")
    per_cpu_deviation = abs(m_t["instructions"] / cpus_t - m_ref["instructions"] / cpus_ref) / (
        m_ref["instructions"] / cpus_ref
    )
    assert per_cpu_deviation > 0.10, "strong fixture must violate per-CPU constancy"
    print(f"  per-CPU instruction deviation {per_cpu_deviation:.3f} -> strong")

    folder = DATA_DIR / "acceptance" / "strong_scaling"
    write(folder / "talp_2x56.json", run_doc(
        "2024-05-01T08:00:00+00:00", ranks_ref, threads_ref, [region_doc("Global", fields_ref)],
    ))
    write(folder / "talp_4x56.json", run_doc(
        "2024-05-01T09:00:00+00:00", ranks_t, threads_t, [region_doc("Global", fields_t)],
    ))


def build_weak() -> None:
    print("weak_scaling acceptance fixture")
    ranks_ref, threads_ref = 2, 56
    cpus_ref = ranks_ref * threads_ref
    ref = Profile(
        mpi_comm=1.0, mpi_lb=1.0, omp_serial=0.936, omp_sched=0.9863, omp_lb=0.9863,
        ipc=1.40, freq_ghz=2.00,
    )
    elapsed_ref = 125_000_000_000
    fields_ref = invert(cpus_ref, elapsed_ref, ref)
    check_consistency(fields_ref, cpus_ref)
    m_ref = forward(fields_ref, cpus_ref)
    expect("ref PE", m_ref["pe"], 0.91, 0.01)

    ranks_t, threads_t = 8, 56
    cpus_t = ranks_t * threads_t
    instr_scal = 0.49
    target = Profile(
        mpi_comm=1.0, mpi_lb=0.991, omp_serial=0.902, omp_sched=0.9905, omp_lb=0.9835,
        ipc=ref.ipc * 1.00, freq_ghz=ref.freq_ghz * 0.99,
    )
    elapsed_t = elapsed_for_instructions(cpus_t, target, m_ref["instructions"] / instr_scal)
    fields_t = invert(cpus_t, elapsed_t, target)
    check_consistency(fields_t, cpus_t)
    m_t = forward(fields_t, cpus_t)

    expect("8x56 PE", m_t["pe"], 0.87, 0.01)
    a_ipc = m_t["ipc"] / m_ref["ipc"]
    a_freq = m_t["freq"] / m_ref["freq"]
    a_instr = m_ref["instructions"] / m_t["instructions"]
    a_comp = a_ipc * a_instr * a_freq
    a_global = m_t["pe"] * a_comp
    expect("8x56 IPC scal", a_ipc, 1.00, 0.01)
    expect("8x56 instr scal", a_instr, 0.49, 0.01)
    expect("8x56 freq scal", a_freq, 0.99, 0.01)
    expect("8x56 comp scal", a_comp, 0.49, 0.01)
    expect("8x56 global", a_global, 0.42, 0.01)
    expect_display("8x56 PE", m_t["pe"], "0.87")
    expect_display("8x56 global", a_global, "0.42")
    # The published column is only reachable with total-instruction (strong)
    # normalization: the per-CPU counts deviate ~49% from the reference.
    per_cpu_deviation = abs(m_t["instructions"] / cpus_t - m_ref["instructions"] / cpus_ref) / (
        m_ref["instructions"] / cpus_ref
    )
    assert per_cpu_deviation > 0.10
    print(f"  per-CPU instruction deviation {per_cpu_deviation:.3f} -> strong normalization")

    folder = DATA_DIR / "acceptance" / "weak_scaling"
    write(folder / "talp_2x56.json", run_doc(
        "2024-05-01T08:00:00+00:00", ranks_ref, threads_ref, [region_doc("Global", fields_ref)],
    ))
    write(folder / "talp_8x56.json", run_doc(
        "2024-05-01T10:00:00+00:00", ranks_t, threads_t, [region_doc("Global", fields_t)],
    ))


# ----------------------------------------------------------------------------
# replica of the documented input folder layout


def build_listing_tree() -> None:
    print("listing_tree fixture (folder-convention replica)")
    tree = DATA_DIR / "listing_tree"

    # comparison: three rank/thread splits of the same 112 CPUs, equal work
    instructions_global = 2.0e13
    comparison = {
        "talp_1x112.json": (1, 112, Profile(1.0, 1.0, 0.95, 0.99, 0.97, 1.35, 2.00)),
        "talp_2x56.json": (2, 56, Profile(0.99, 0.995, 0.96, 0.99, 0.98, 1.38, 1.99)),
        "talp_4x28.json": (4, 28, Profile(0.985, 0.99, 0.97, 0.985, 0.98, 1.36, 1.98)),
    }
    for index, (name, (ranks, threads, profile)) in enumerate(comparison.items()):
        cpus = ranks * threads
        elapsed = elapsed_for_instructions(cpus, profile, instructions_global)
        fields = invert(cpus, elapsed, profile)
        check_consistency(fields, cpus)
        regions = [region_doc("Global", fields), *subregions(cpus, elapsed, profile)]
        write(tree / "mesh_1" / "comparison" / name, run_doc(
            f"2024-05-02T1{index}:00:00+00:00", ranks, threads, regions,
        ))

    # strong_scaling: total work constant while CPUs double
    instructions_strong = 1.5e13
    strong = {
        "talp_8x14.json": (8, 14, Profile(0.99, 0.995, 0.97, 0.99, 0.98, 1.42, 2.00), 1.0),
        "talp_8x28.json": (8, 28, Profile(0.96, 0.97, 0.90, 0.97, 0.95, 1.90, 1.85), 0.995),
    }
    for index, (name, (ranks, threads, profile, scal)) in enumerate(strong.items()):
        cpus = ranks * threads
        elapsed = elapsed_for_instructions(cpus, profile, instructions_strong / scal)
        fields = invert(cpus, elapsed, profile)
        check_consistency(fields, cpus)
        regions = [region_doc("Global", fields), *subregions(cpus, elapsed, profile)]
        write(tree / "mesh_1" / "strong_scaling" / name, run_doc(
            f"2024-05-03T1{index}:00:00+00:00", ranks, threads, regions,
        ))

    # weak_scaling: work per CPU constant, two commits of history; the newer
    # commit fixes a serialization bottleneck
    commits = [
        ("9dc04ca", "2024-04-10T08:30:00+00:00", "2024-04-10T11:00:00+00:00", 0.0),
        ("ed8b9ef", "2024-04-24T09:15:00+00:00", "2024-04-24T12:00:00+00:00", 0.05),
    ]
    weak = {
        "talp_8x14": (8, 14, Profile(0.99, 0.99, 0.88, 0.985, 0.97, 1.40, 1.99), 1.1e13),
        "talp_8x28": (8, 28, Profile(0.985, 0.985, 0.86, 0.98, 0.96, 1.39, 1.97), 2.2e13),
    }
    for short, committed, finished, serial_gain in commits:
        for stem, (ranks, threads, profile, instructions) in weak.items():
            cpus = ranks * threads
            improved = Profile(
                mpi_comm=profile.mpi_comm,
                mpi_lb=profile.mpi_lb,
                omp_serial=profile.omp_serial + serial_gain,
                omp_sched=profile.omp_sched,
                omp_lb=profile.omp_lb,
                ipc=profile.ipc,
                freq_ghz=profile.freq_ghz,
            )
            elapsed = elapsed_for_instructions(cpus, improved, instructions)
            fields = invert(cpus, elapsed, improved)
            check_consistency(fields, cpus)
            regions = [region_doc("Global", fields), *subregions(cpus, elapsed, improved)]
            write(tree / "mesh_2" / "weak_scaling" / f"{stem}_{short}.json", run_doc(
                finished, ranks, threads, regions, git=(short, "main", committed),
            ))


def main() -> None:
    build_strong()
    build_weak()
    build_listing_tree()
    print("all fixture designs verified")


if __name__ == "__main__":
    main()
