"""End-to-end checks of the command-line tool: exit codes, schema validity,
determinism across runs and thread counts, and the dioph CSV point count."""

import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema

TOOL = sys.argv[1]
ROOT = pathlib.Path(sys.argv[2])
DATA = ROOT / "data"
SCHEMAS = ROOT / "schemas"
failures = []


def check(cond, message):
    print(("ok   " if cond else "FAIL ") + message)
    if not cond:
        failures.append(message)


def run(args, out):
    proc = subprocess.run([TOOL, *args, "--out", str(out)], capture_output=True, text=True)
    return proc.returncode, proc.stderr


def validate(kind, path):
    schema = json.loads((SCHEMAS / f"{kind}.schema.json").read_text())
    try:
        jsonschema.validate(json.loads(path.read_text()), schema)
        return True
    except jsonschema.ValidationError as e:
        print(e.message)
        return False


with tempfile.TemporaryDirectory() as tmp:
    tmp = pathlib.Path(tmp)
    for name in ["cat_map", "salem_quartic", "phi5", "sextic_one_pair", "block6"]:
        check(validate("matrix", DATA / f"{name}.json"), f"input {name} is a valid matrix file")
    for name in ["salem_shear", "salem_linear"]:
        check(validate("perturbed_map", DATA / f"{name}.json"), f"input {name} is a valid map file")

    cases = [
        ("analyze", ["analyze", str(DATA / "cat_map.json")], 0),
        ("analyze", ["analyze", str(DATA / "salem_quartic.json")], 0),
        ("analyze", ["analyze", str(DATA / "phi5.json")], 2),
        ("analyze", ["analyze", str(DATA / "block6.json")], 0),
        ("survey", ["survey", "--n", "4", "--height", "1", "--with-pa"], 0),
        ("pa", ["pa", str(DATA / "salem_quartic.json"), "--samples", "20"], 0),
        ("pa", ["pa", str(DATA / "block6.json"), "--samples", "20"], 0),
        ("dioph", ["dioph", str(DATA / "salem_quartic.json"), "--radius", "20"], 0),
        ("perturb", ["perturb", str(DATA / "salem_quartic.json"), "--eps", "0"], 0),
        ("perturb", ["perturb", "--map", str(DATA / "salem_shear.json"), "--samples", "50"], 0),
        ("curve", ["curve", str(DATA / "salem_quartic.json"), "--eps", "0.3", "--radius", "10"], 0),
        ("saturate", ["saturate", str(DATA / "salem_quartic.json"), "--samples", "4"], 0),
    ]
    outputs = {}
    for i, (kind, args, expected) in enumerate(cases):
        out = tmp / f"{i}_{kind}.json"
        code, err = run(args, out)
        check(code == expected, f"{' '.join(args[:2])}: exit {code} (expected {expected}) {err.strip()}")
        check(out.exists() and validate(kind, out), f"{' '.join(args[:2])}: output validates against {kind}.schema.json")
        outputs[i] = out

    analyze = lambda i: json.loads(outputs[i].read_text())["report"]
    check(analyze(0)["anosov"] is True, "cat map is Anosov")
    check(analyze(1)["dim_center"] == 2, "Salem companion has a two-dimensional center")
    check(analyze(2)["ergodic"] is False, "Phi_5 companion is not ergodic")
    check(json.loads(outputs[8].read_text())["pass"] is True, "perturb at eps = 0 passes its degeneration checks")
    check(abs(json.loads(outputs[10].read_text())["winding"]) == 1, "curve winds once around E^su")

    # malformed and out-of-hypothesis inputs
    bad = tmp / "bad.json"
    bad.write_text('{"n": 2, "rows": [[1, 2]]}')
    check(run(["analyze", str(bad)], tmp / "x.json")[0] == 1, "non-square matrix is an input error")
    bad.write_text("{not json")
    check(run(["analyze", str(bad)], tmp / "x.json")[0] == 1, "malformed JSON is an input error")
    check(run(["analyze", str(tmp / "missing.json")], tmp / "x.json")[0] == 1, "missing file is an input error")
    check(run(["pa", str(DATA / "cat_map.json")], tmp / "x.json")[0] == 2, "pa on an Anosov map is out of hypotheses")
    check(run(["saturate", str(DATA / "salem_quartic.json"), "--eps", "0.1"], tmp / "x.json")[0] == 4,
          "saturation radii beyond the budget are a budget error")

    # dioph CSV at M = 50 lists exactly the lattice points of the ball
    csv = tmp / "dioph.csv"
    code, _ = run(["dioph", str(DATA / "salem_quartic.json"), "--radius", "50", "--format", "csv"], csv)
    with csv.open() as f:
        header = f.readline()
        columns = f.readline().strip()
        rows = sum(1 for _ in f)
    csv.unlink()
    code_json, _ = run(["dioph", str(DATA / "salem_quartic.json"), "--radius", "50"], tmp / "d50.json")
    counted = json.loads((tmp / "d50.json").read_text())["report"]["count_ball"]
    check(code == 0 and code_json == 0, "dioph M = 50 exits 0 in both formats")
    check(header.startswith("# {") and columns == "norm,center_norm", "dioph CSV echoes its config")
    check(rows == counted, f"dioph CSV has {rows} rows, count_ball gives {counted}")

    # byte-identical outputs across runs and thread counts
    deterministic = [
        ["perturb", "--map", str(DATA / "salem_shear.json"), "--samples", "50"],
        ["saturate", str(DATA / "salem_quartic.json"), "--samples", "4"],
        ["survey", "--n", "4", "--height", "1"],
        ["pa", str(DATA / "salem_quartic.json"), "--samples", "20", "--seed", "9"],
    ]
    for args in deterministic:
        texts = []
        for j, threads in enumerate(["1", "1", "8"]):
            out = tmp / f"det{j}.out"
            run([*args, "--threads", threads], out)
            texts.append(out.read_bytes())
        check(texts[0] == texts[1] == texts[2], f"{args[0]}: identical bytes across runs and 1 vs 8 threads")

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
