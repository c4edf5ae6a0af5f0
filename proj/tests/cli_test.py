"""End-to-end checks of the cak binary: reports, exit codes, determinism."""

import json
import os
import subprocess
import sys
import tempfile

CAK = sys.argv[1]
DATA = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")
failures = []


def run(*args, env=None):
    e = dict(os.environ)
    e.pop("CAK_CAPS", None)
    e.update(env or {})
    p = subprocess.run([CAK, *args], capture_output=True, text=True, env=e)
    try:
        report = json.loads(p.stdout)
    except ValueError:
        report = None
    return p.returncode, report, p.stdout, p.stderr


def check(name, cond, extra=""):
    if not cond:
        failures.append(f"{name} {extra}")
    print(("ok   " if cond else "FAIL ") + name)


def d(name):
    return os.path.join(DATA, name)


tmp = tempfile.mkdtemp()

code, rep, _, _ = run("eval", "--model", d("kripke.json"), "--formula", d("reach.mu"))
check("eval mu", code == 0 and rep["verdicts"] == {"s0": True, "s1": True, "s2": False}, str(rep))

code, rep, _, _ = run("eval", "--model", d("kripke.json"), "--formula", d("root_child.mso"), "--logic", "mso")
check("eval mso", code == 0 and rep["verdicts"] == {"s0": True, "s1": False, "s2": False}, str(rep))

code, rep, _, _ = run("eval", "--model", d("mon1.json"), "--expr", "exists z . sr(z) and box(z, p)", "--logic", "mmso",
                      "--point", "s0")
check("eval mmso", code == 0 and rep["verdicts"] == {"s0": True}, str(rep))

code, _, _, err = run("eval", "--model", d("kripke.json"), "--formula", d("bad.mu"))
reason = json.loads(err.strip().splitlines()[-1])
check("syntax error exit 1 with position", code == 1 and reason["error"] == "syntax" and reason["line"] >= 1 and "column" in reason, err)

code, _, _, err = run("eval", "--model", d("missing.json"), "--expr", "p")
check("missing file is a domain error", code == 1 and json.loads(err)["error"] == "domain", err)

code, _, _, err = run("eval", "--model", d("kripke.json"))
check("eval without formula", code == 1, err)

code, _, _, err = run("frobnicate")
check("usage error exit 3", code == 3 and json.loads(err)["error"] == "usage", err)

code, _, out, _ = run("--help")
check("help documents the grammars", code == 0 and "Formula grammars" in out)

aut = os.path.join(tmp, "reach.json")
code, rep, _, _ = run("compile", "--flavor", "mu", "--formula", d("reach.mu"), "--out", aut)
check("compile mu", code == 0 and os.path.exists(aut) and rep["outputs"]["automaton"] == aut)
for s, want in (("s0", True), ("s1", True), ("s2", False)):
    code, rep, _, _ = run("accept", "--automaton", aut, "--model", d("kripke.json"), "--point", s)
    check(f"compiled automaton at {s}", code == 0 and rep["verdicts"]["accepts"] == want, str(rep))

code, rep, _, _ = run("accept", "--automaton", aut, "--model", d("kripke.json"), "--point", "s0", "--dump-game", "-")
check("dump game as DOT", code == 0 and rep["game_dot"].startswith("digraph") and rep["game_positions"] > 0)

code, _, _, err = run("accept", "--automaton", d("dia_p.json"), "--model", d("kripke.json"), "--point", "s0")
check("SO1 automaton refuses full mode", code == 1, err)

tree = os.path.join(tmp, "tree.json")
code, rep, _, _ = run("unravel", "--model", d("kripke.json"), "--point", "s0", "--depth", "4", "--out", tree)
check("unravel", code == 0 and rep["total"] and rep["nodes"] == 9 and rep["gamma"]["s0"] == "s0", str(rep))
code, rep, _, _ = run("accept", "--automaton", d("dia_p.json"), "--model", tree, "--point", "s0", "--mode", "tree")
check("tree acceptance", code == 0 and rep["verdicts"]["accepts"] is True, str(rep))

comp = os.path.join(tmp, "comp.json")
code, _, _, _ = run("construct", "--op", "complement", "--automaton", d("dia_p.json"), "--out", comp)
code2, rep, _, _ = run("accept", "--automaton", comp, "--model", tree, "--point", "s0", "--mode", "tree")
check("complement flips", code == 0 and code2 == 0 and rep["verdicts"]["accepts"] is False, str(rep))

code, _, _, err = run("construct", "--op", "project", "--automaton", d("dia_p.json"))
check("project needs --var", code == 1, err)
code, _, _, err = run("construct", "--op", "union", "--automaton", d("dia_p.json"))
check("union needs two automata", code == 1, err)
code, rep, _, _ = run("construct", "--op", "union", "--automaton", d("dia_p.json"), "--automaton", comp)
check("union to the report", code == 0 and "automaton" in rep and rep["states"] >= 4, str(rep))

code, rep, _, _ = run("translate", "--so-to-ml", "--automaton", d("ge2.json"), "--functor", "bag", "--construction", "bag",
                      "--k", "1", "--m", "1")
check("translate", code == 0 and rep["automaton"]["flavor"] == "ml1" and len(rep["liftings"]) > 0, str(rep))

btree = os.path.join(tmp, "btree.json")
run("unravel", "--model", d("bag.json"), "--point", "s0", "--depth", "6", "--construction", "bag", "--out", btree)
for s in ("s0",):
    _, t, _, _ = run("accept", "--automaton", d("ge2.json"), "--model", btree, "--point", s, "--mode", "tree")
    _, f, _, _ = run("accept", "--automaton", d("ge2.json"), "--model", d("bag.json"), "--point", s, "--so-to-ml",
                     "--construction", "bag", "--k", "1", "--m", "1")
    check("unravelled tree agrees with the translated automaton", t["verdicts"] == f["verdicts"], f"{t} {f}")

code, rep, _, _ = run("bisim", "--model1", d("mon1.json"), "--model2", d("mon2.json"), "--point1", "s0", "--point2", "t0")
check("bisim related", code == 0 and rep["verdicts"]["bisimilar"] is True and "(s0,t0)" in rep["relation"], str(rep))
code, rep, _, _ = run("bisim", "--model1", d("mon1.json"), "--model2", d("mon3.json"), "--point1", "s0", "--point2", "u0")
check("bisim unrelated", code == 0 and rep["verdicts"]["bisimilar"] is False, str(rep))
code, rep, _, _ = run("bisim", "--global", "--model1", d("mon1.json"), "--model2", d("mon3.json"), "--point1", "s0",
                      "--point2", "u0")
check("global bisim fails", code == 0 and rep["relation"] is None, str(rep))

code, rep, _, _ = run("demo", "counterexample")
check("demo", code == 0 and rep["verdicts"]["violation"] is True
      and rep["demo"]["step3_minimal_supports"]["all_contain_v*"] is True, str(rep))

code, rep, _, err = run("selftest", "--level", "quick", "--criterion", "7", "--criterion", "11")
check("selftest", code == 0 and rep["verdicts"]["all_pass"] and len(rep["criteria"]) == 2, err)

a = run("eval", "--model", d("kripke.json"), "--formula", d("reach.mu"))[2]
b = run("eval", "--model", d("kripke.json"), "--formula", d("reach.mu"))[2]
check("deterministic reports", a == b)
a = run("--seed", "5", "selftest", "--criterion", "11")[2]
b = run("--seed", "5", "--jobs", "2", "selftest", "--criterion", "11")[2]
check("seeded selftest is reproducible across job counts", a == b)

code, _, _, err = run("eval", "--model", d("kripke.json"), "--expr", "exists q . q sub p", "--logic", "mso",
                      env={"CAK_CAPS": "quantifier=2"})
check("cap hit exits 2", code == 2 and json.loads(err)["error"] == "cap", err)
code, rep, _, _ = run("eval", "--model", d("kripke.json"), "--expr", "p", env={"CAK_CAPS": "quantifier=10"})
check("raised caps are reported", code == 0 and rep["warnings"][0].startswith("caps taken from CAK_CAPS"), str(rep))
code, _, _, err = run("eval", "--model", d("kripke.json"), "--expr", "p", env={"CAK_CAPS": "colour=3"})
check("unknown cap", code == 1, err)

if failures:
    print("\n".join(failures))
    sys.exit(1)
