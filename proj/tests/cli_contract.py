#!/usr/bin/env python3
"""Black-box contract tests for the flatbundle CLI.

Usage: cli_contract.py /path/to/flatbundle

Each check runs the binary as a subprocess and inspects exit codes and the
JSON report on stdout. The contract: exit 0 on pass, 2 on a verification
failure or precondition refusal (report carries "pass": false and, for
refusals, a "precondition" message), 1 on usage or input errors (report
carries "error"). Reports are byte-identical across reruns with the same
inputs and seed.
"""

import json
import math
import subprocess
import sys
import tempfile
from pathlib import Path

failures = []


def run(cli, *args):
    return subprocess.run([str(cli), *args], capture_output=True, text=True)


def check(name, ok, detail=""):
    status = "ok" if ok else "FAIL"
    print(f"{status:4} {name}" + (f" ({detail})" if detail and not ok else ""))
    if not ok:
        failures.append(name)


def report(proc):
    try:
        return json.loads(proc.stdout)
    except json.JSONDecodeError:
        return None


def main():
    if len(sys.argv) != 2:
        print("usage: cli_contract.py <flatbundle binary>", file=sys.stderr)
        return 2
    cli = Path(sys.argv[1])
    tmp = Path(tempfile.mkdtemp(prefix="flatbundle_cli_"))

    def write_json(name, obj):
        p = tmp / name
        p.write_text(json.dumps(obj))
        return p

    # fixture + validate round trip on the seven vertex torus
    p = run(cli, "fixture", "torus7")
    check("fixture torus7 exits 0", p.returncode == 0)
    torus = report(p)
    check("fixture emits schema 1 json", torus is not None and torus.get("schema") == "1")
    torus_path = write_json("torus7.json", torus)

    p = run(cli, "validate", str(torus_path))
    rep = report(p)
    check("validate torus7 exits 0", p.returncode == 0)
    check("validate reports pass", rep and rep["pass"] is True)
    check("validate names its command", rep and rep.get("command") == "validate")
    check("torus7 has euler characteristic 0", rep and rep["euler_characteristic"] == 0)
    check("torus7 is a closed oriented surface", rep and rep["closed_oriented_surface"] is True)

    # flipping one face orientation breaks surface coherence: audit failure, exit 2
    bad_torus = json.loads(json.dumps(torus))
    key = sorted(bad_torus["orientation"])[0]
    bad_torus["orientation"][key] = -bad_torus["orientation"][key]
    p = run(cli, "validate", str(write_json("torus7_flipped.json", bad_torus)))
    rep = report(p)
    check("validate flipped orientation exits 2", p.returncode == 2)
    check("flipped orientation fails the surface check",
          rep and rep["pass"] is False and rep["closed_oriented_surface"] is False)

    # monopole fixture: audit passes, chern recovers the charge
    p = run(cli, "fixture", "monopole", "--q", "1", "--depth", "2")
    check("fixture monopole exits 0", p.returncode == 0)
    mono = report(p)
    mono_path = write_json("monopole.json", mono)

    p = run(cli, "audit", str(mono_path))
    rep = report(p)
    check("audit monopole exits 0", p.returncode == 0)
    check("audit reports cocycle pass", rep and rep["pass"] is True)
    check("audit carries a flatness estimate", rep and rep["flatness"]["audit"] > 0)

    p = run(cli, "chern", str(mono_path))
    rep = report(p)
    check("chern monopole exits 0", p.returncode == 0)
    check("chern recovers charge 1", rep and rep["chern"] == 1)
    check("total flux is 2 pi", rep and abs(rep["total_flux"] - 2 * math.pi) < 1e-9)

    # tampered transition: coherent shape, broken cocycle, exit 2 with a
    # pinpointed first violation
    bad = json.loads(json.dumps(mono))
    key = next(k for k in sorted(bad["transitions"])
               if "<" in k and len(k.split("<")[1].split(",")) == 2)
    re0, im0 = bad["transitions"][key]["values"][0][0][0]
    c, s = math.cos(0.5), math.sin(0.5)
    bad["transitions"][key]["values"][0][0][0] = [re0 * c - im0 * s, re0 * s + im0 * c]
    p = run(cli, "audit", str(write_json("tampered.json", bad)))
    rep = report(p)
    check("audit tampered bundle exits 2", p.returncode == 2)
    check("tampered audit fails", rep and rep["pass"] is False)
    fv = rep["cocycle"].get("first_violation") if rep else None
    check("tampered audit names a violation", fv is not None and fv["residual"] > 0.1)

    # trivialize a contractible base, refuse a torus
    p = run(cli, "fixture", "random", "--random-base", "delta3", "--seed", "7",
            "--eps", "0.005")
    check("fixture random delta3 exits 0", p.returncode == 0)
    delta3 = report(p)
    delta3_path = write_json("delta3.json", delta3)

    p = run(cli, "trivialize", str(delta3_path))
    rep = report(p)
    check("trivialize delta3 exits 0", p.returncode == 0)
    check("trivialization residual is tiny", rep and rep["residual"] < 1e-12)
    check("edge certificates are attached", rep and len(rep["certificates"]) > 0)

    p = run(cli, "fixture", "random", "--random-base", "torus7", "--seed", "3",
            "--eps", "0.01")
    torus_bundle = report(p)
    torus_bundle_path = write_json("torus_bundle.json", torus_bundle)
    p = run(cli, "trivialize", str(torus_bundle_path))
    rep = report(p)
    check("trivialize torus exits 2", p.returncode == 2)
    check("torus refusal names its precondition",
          rep and "precondition" in rep and "simply connected" in rep["precondition"])

    # extend edge data back up to the full tetrahedron skeleton
    pruned = dict(delta3)
    pruned["transitions"] = {k: v for k, v in delta3["transitions"].items()
                             if len(k.split("<")[1].split(",")) <= 2}
    pruned_path = write_json("delta3_edges.json", pruned)
    p = run(cli, "extend", str(pruned_path), "--to-skeleton", "3")
    check("extend to skeleton 3 exits 0", p.returncode == 0)
    extended = report(p)
    extended_path = write_json("extended.json", extended)
    p = run(cli, "audit", str(extended_path))
    rep = report(p)
    check("extended bundle audits clean", p.returncode == 0 and rep and rep["pass"] is True)

    p = run(cli, "extend", str(pruned_path), "--to-skeleton", "0")
    check("extend to skeleton 0 is a usage error", p.returncode == 1)

    # rep <-> bundle round trip over the torus
    p = run(cli, "bundle2rep", str(torus_bundle_path))
    rep = report(p)
    check("bundle2rep exits 0", p.returncode == 0)
    check("torus rep has 15 generators", rep and len(rep["generators"]) == 15)
    check("rep defect is reported", rep and 0 < rep["defect"] < 0.2)
    rep_path = write_json("rep.json", rep)

    p = run(cli, "rep2bundle", str(rep_path), "--base", "torus7")
    check("rep2bundle exits 0", p.returncode == 0)
    round_path = write_json("roundtrip.json", report(p))
    p = run(cli, "audit", str(round_path))
    check("round tripped bundle audits clean", p.returncode == 0)

    # a commuting pair of scalars substitutes onto the torus with zero flux
    uv = {"schema": "1", "type": "rep", "generators": ["u", "v"],
          "relations": [[1, 2, -1, -2]], "basepoint": -1,
          "generator_loops": [], "generator_edges": [],
          "images": [[[[0.8, 0.6]]], [[[1.0, 0.0]]]]}
    p = run(cli, "rep2bundle", str(write_json("uv.json", uv)))
    check("rep2bundle accepts a (u,v) pair", p.returncode == 0)
    uv_path = write_json("uv_bundle.json", report(p))
    p = run(cli, "chern", str(uv_path))
    rep = report(p)
    check("commuting pair has chern 0", p.returncode == 0 and rep and rep["chern"] == 0)

    # K-area probe: two clock-shift ranks witness, one alone cannot
    p = run(cli, "probe", "--clock-shift", "6,12")
    rep = report(p)
    check("probe 6,12 exits 0", p.returncode == 0)
    check("probe witnesses chern 1",
          rep and rep["verdict"]["witness"] is True and rep["verdict"]["chern"] == 1)
    check("probe defects shrink",
          rep and rep["entries"][1]["eps"] < rep["entries"][0]["eps"])
    probe_stdout = p.stdout

    p = run(cli, "probe", "--clock-shift", "6")
    rep = report(p)
    check("single probe point exits 2", p.returncode == 2)
    check("single probe point is refused as no sequence",
          rep and rep["verdict"]["witness"] is False and "sequence" in rep["verdict"]["detail"])

    # input errors: exit 1 with an error message, never a traceback
    (tmp / "garbage.json").write_text("this is not json")
    p = run(cli, "audit", str(tmp / "garbage.json"))
    rep = report(p)
    check("malformed json exits 1", p.returncode == 1)
    check("malformed json names the error", rep and "error" in rep)
    p = run(cli, "audit", str(tmp / "missing.json"))
    check("missing file exits 1", p.returncode == 1)
    p = run(cli, "fixture", "nosuch")
    check("unknown fixture exits 1", p.returncode == 1)
    p = run(cli)
    check("missing subcommand exits 1", p.returncode == 1)
    p = run(cli, "--help")
    check("help exits 0", p.returncode == 0 and "Usage" in p.stdout or "usage" in p.stdout.lower())

    # determinism: identical inputs and seed give byte-identical reports
    a = run(cli, "fixture", "random", "--random-base", "triangle", "--seed", "42")
    b = run(cli, "fixture", "random", "--random-base", "triangle", "--seed", "42")
    check("seeded fixture is byte-identical", a.stdout == b.stdout and a.returncode == 0)
    c = run(cli, "fixture", "random", "--random-base", "triangle", "--seed", "43")
    check("changing the seed changes the bundle", c.stdout != a.stdout)
    a = run(cli, "audit", str(mono_path))
    b = run(cli, "audit", str(mono_path))
    check("audit report is byte-identical", a.stdout == b.stdout)
    b = run(cli, "probe", "--clock-shift", "6,12")
    check("probe report is byte-identical", b.stdout == probe_stdout)

    print()
    if failures:
        print(f"{len(failures)} contract check(s) failed:")
        for name in failures:
            print(f"  - {name}")
        return 1
    print("all contract checks passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
