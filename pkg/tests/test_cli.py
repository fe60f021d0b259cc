"""CLI: dispatch coverage, exit codes, schemas, JSON reports, determinism."""

import json
import os
import subprocess
import sys

from defalg.cli import SUBCOMMANDS, build_parser, main
from defalg.report import CheckReport

REPO = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
INPUTS = os.path.join(REPO, "inputs")


def run_cli(*argv, expect=0):
    cmd = [sys.executable, "-m", "defalg.cli", *argv]
    proc = subprocess.run(cmd, capture_output=True, text=True, cwd=REPO)
    assert proc.returncode == expect, (proc.stdout, proc.stderr)
    return proc.stdout


def test_dispatch_table_covers_documented_subcommands():
    documented = {
        "check-dgla", "check-na", "mc", "gauge", "obstruction", "cohomology",
        "cones", "exp-der", "homotopy-eval", "bch", "dsw", "friedrichs",
        "coder", "comorph", "check-linfty", "from-dgla", "linfty-morphism",
        "mc-linfty", "hodge-f", "gbv-check", "schouten", "delta",
        "tian-todorov", "gbv-to-abelian", "lefschetz", "suite",
    }
    assert set(SUBCOMMANDS) == documented
    parser = build_parser()
    # every subcommand parses with --format json
    for name in documented:
        argv = [name, "--format", "json"]
        if name == "lefschetz":
            argv.insert(1, "identities")
        args = parser.parse_args(argv)
        assert args.subcommand == name


def test_check_dgla_pass_exit_zero(tmp_path):
    out = run_cli("check-dgla", "--input", os.path.join(INPUTS, "abelian_dgla.json"))
    assert "[PASS]" in out


def test_check_dgla_failure_exit_one(tmp_path):
    bad = tmp_path / "bad_dgla.json"
    bad.write_text(
        json.dumps(
            {
                "kind": "dgla",
                "basis": [{"name": "x", "degree": 1}, {"name": "y", "degree": 2}],
                "bracket": [
                    {
                        "left": "x",
                        "right": "x",
                        "value": [{"basis": "y", "coeff": "1"}],
                    },
                    {
                        "left": "x",
                        "right": "y",
                        "value": [{"basis": "x", "coeff": "1"}],
                    },
                ],
            }
        )
    )
    out = run_cli("check-dgla", "--input", str(bad), expect=1)
    assert "FAIL" in out


def test_malformed_rational_names_field_path(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(
        json.dumps(
            {
                "kind": "dgla",
                "basis": [{"name": "x", "degree": 1}],
                "differential": [
                    {"from": "x", "value": [{"basis": "x", "coeff": "1/0"}]}
                ],
            }
        )
    )
    out = run_cli("check-dgla", "--input", str(bad), expect=2)
    assert "differential[0].value[0].coeff" in out


def test_unknown_subcommand_exits_two():
    proc = subprocess.run(
        [sys.executable, "-m", "defalg.cli", "frobnicate"],
        capture_output=True,
        text=True,
        cwd=REPO,
    )
    assert proc.returncode == 2


def test_json_report_round_trips():
    out = run_cli(
        "bch",
        "--input",
        os.path.join(INPUTS, "free_bch.json"),
        "--mode",
        "explicit",
        "--truncate",
        "3",
        "--format",
        "json",
    )
    payload = json.loads(out)
    rep = CheckReport.from_dict(payload)
    assert rep.to_dict() == payload
    words = {tuple(t["word"]): t["coeff"] for t in payload["witness"]["terms"]}
    assert words[("a", "b")] == "1/2"
    assert words[("a", "a", "b")] == "1/12"  # from (1/12)[a,[a,b]]


def test_reports_byte_identical_for_fixed_input():
    argv = (
        "check-dgla",
        "--input",
        os.path.join(INPUTS, "odd_square_dgla.json"),
        "--format",
        "json",
    )
    assert run_cli(*argv) == run_cli(*argv)


def test_suite_deterministic_and_seed_sensitive():
    one = run_cli("suite", "--seed", "7", "--format", "json")
    two = run_cli("suite", "--seed", "7", "--format", "json")
    assert one == two
    payload = json.loads(one)
    assert payload["status"] == "pass"
    assert payload["info"]["seed"] == 7


def test_lefschetz_subcommands():
    out = run_cli("lefschetz", "identities", "--dim", "2", "--format", "json")
    payload = json.loads(out)
    assert payload["status"] == "pass"
    assert payload["info"]["basis_size"] == 16
    out = run_cli(
        "lefschetz",
        "decompose",
        "--dim",
        "2",
        "--input",
        os.path.join(INPUTS, "covector.json"),
        "--format",
        "json",
    )
    payload = json.loads(out)
    comps = payload["witness"]["components"]
    assert [c["power"] for c in comps] == [0, 1]
    assert all(c["primitive"] for c in comps)


def test_delta_and_schouten_commands(tmp_path):
    out = run_cli(
        "delta", "--input", os.path.join(INPUTS, "polyvector.json"), "--format", "json"
    )
    payload = json.loads(out)
    assert payload["witness"]["delta"] == [
        {"monomial": [0, 0], "frame": [], "coeff": "1"}
    ]
    pair = tmp_path / "pair.json"
    pair.write_text(
        json.dumps(
            {
                "kind": "polyvector_pair",
                "vars": 2,
                "left": [{"coeff": "1", "monomial": [0, 0], "frame": [1]}],
                "right": [{"coeff": "1", "monomial": [1, 0], "frame": [2]}],
            }
        )
    )
    out = run_cli("schouten", "--input", str(pair), "--format", "json")
    payload = json.loads(out)
    assert payload["witness"]["bracket"] == [
        {"monomial": [0, 0], "frame": [2], "coeff": "1"}
    ]
    out = run_cli("tian-todorov", "--input", str(pair))
    assert "[PASS]" in out


def test_hodge_builtins():
    for name in ("trivial", "rank-one", "derived"):
        out = run_cli("hodge-f", "--builtin", name, "--max-arity", "3", "--format", "json")
        assert json.loads(out)["status"] == "pass"
    run_cli("hodge-f", "--builtin", "nope", expect=2)


def test_gbv_check_command(tmp_path):
    gbv = tmp_path / "gbv.json"
    gbv.write_text(
        json.dumps(
            {
                "kind": "gbv",
                "algebra": {
                    "basis": [
                        {"name": "one", "degree": 0},
                        {"name": "th1", "degree": -1},
                        {"name": "th2", "degree": 1},
                        {"name": "th12", "degree": 0},
                    ],
                    "unit": "one",
                    "product": [
                        {
                            "left": "th1",
                            "right": "th2",
                            "value": [{"basis": "th12", "coeff": "1"}],
                        }
                    ],
                },
                "delta": [
                    {"from": "th1", "value": [{"basis": "one", "coeff": "1"}]},
                    {"from": "th12", "value": [{"basis": "th2", "coeff": "2"}]},
                ],
            }
        )
    )
    out = run_cli("gbv-check", "--input", str(gbv), "--format", "json")
    assert json.loads(out)["status"] == "pass"
    out = run_cli("gbv-to-abelian", "--input", str(gbv), "--max-arity", "4")
    assert "[PASS]" in out


def test_mc_and_gauge_commands(tmp_path):
    problem = {
        "kind": "mc_problem",
        "dgla": {
            "basis": [
                {"name": "a", "degree": 0},
                {"name": "x", "degree": 1},
                {"name": "y", "degree": 1},
            ],
            "bracket": [
                {"left": "a", "right": "x", "value": [{"basis": "y", "coeff": "1"}]}
            ],
        },
        "base": {
            "basis": [{"name": "t", "degree": 0}, {"name": "t2", "degree": 0}],
            "product": [
                {"left": "t", "right": "t", "value": [{"basis": "t2", "coeff": "1"}]}
            ],
        },
        "element": [{"l": "x", "a": "t", "coeff": "1"}],
    }
    f = tmp_path / "mc.json"
    f.write_text(json.dumps(problem))
    out = run_cli("mc", "--input", str(f), "--format", "json")
    assert json.loads(out)["status"] == "pass"
    problem["kind"] = "gauge_problem"
    problem["gauge_by"] = [{"l": "a", "a": "t", "coeff": "1"}]
    g = tmp_path / "gauge.json"
    g.write_text(json.dumps(problem))
    payload = json.loads(run_cli("gauge", "--input", str(g), "--format", "json"))
    got = {(t["basis"], t["coeff"]) for t in payload["witness"]["result"]}
    assert got == {("x(x)t", "1"), ("y(x)t2", "1")}


def test_basis_cap_env(tmp_path):
    big = tmp_path / "big.json"
    big.write_text(
        json.dumps(
            {
                "kind": "dgla",
                "basis": [{"name": f"e{i}", "degree": 0} for i in range(20)],
            }
        )
    )
    env = dict(os.environ)
    env["DEFALG_MAX_BASIS"] = "10"
    proc = subprocess.run(
        [sys.executable, "-m", "defalg.cli", "check-dgla", "--input", str(big)],
        capture_output=True,
        text=True,
        cwd=REPO,
        env=env,
    )
    assert proc.returncode == 2
    assert "cap" in proc.stdout


def test_main_entry_in_process():
    code = main(["check-dgla", "--input", os.path.join(INPUTS, "abelian_dgla.json")])
    assert code == 0


def test_remaining_subcommands_end_to_end(tmp_path):
    """Functional smoke of every subcommand not covered above, through real
    input files."""

    def write(name, payload):
        f = tmp_path / name
        f.write_text(json.dumps(payload))
        return str(f)

    dgla = {
        "kind": "dgla",
        "basis": [
            {"name": "x", "degree": 1},
            {"name": "z", "degree": 1},
            {"name": "y", "degree": 2},
        ],
        "bracket": [
            {"left": "x", "right": "x", "value": [{"basis": "y", "coeff": "1"}]}
        ],
        "differential": [{"from": "z", "value": [{"basis": "y", "coeff": "1"}]}],
    }
    artin3 = {
        "kind": "artin_dg",
        "basis": [{"name": "t", "degree": 0}, {"name": "t2", "degree": 0}],
        "product": [
            {"left": "t", "right": "t", "value": [{"basis": "t2", "coeff": "1"}]}
        ],
    }

    # obstruction: the worked 1/2 class
    payload = json.loads(
        run_cli(
            "obstruction",
            "--input",
            write(
                "obs.json",
                {
                    "kind": "obstruction_problem",
                    "dgla": {
                        "kind": "dgla",
                        "basis": [
                            {"name": "x", "degree": 1},
                            {"name": "y", "degree": 2},
                        ],
                        "bracket": [
                            {
                                "left": "x",
                                "right": "x",
                                "value": [{"basis": "y", "coeff": "1"}],
                            }
                        ],
                    },
                    "total": artin3,
                    "kernel": ["t2"],
                    "element": [{"l": "x", "a": "t", "coeff": "1"}],
                },
            ),
            "--format",
            "json",
            expect=1,
        )
    )
    assert payload["witness"]["classes"]["t2"] == ["1/2"]
    assert payload["witness"]["vanishes"] is False

    # cohomology of the dgla above: H^1 = <x>, H^2 = 0
    payload = json.loads(
        run_cli(
            "cohomology",
            "--input",
            write(
                "coh.json",
                {"kind": "cohomology_problem", "structure": dgla, "degree": 1},
            ),
            "--format",
            "json",
        )
    )
    assert payload["witness"]["dims"] == {"cycles": 1, "boundaries": 0, "h": 1}

    # cones of the (t)/(t^3) extension
    payload = json.loads(
        run_cli(
            "cones",
            "--input",
            write(
                "cone.json",
                {"kind": "small_extension", "total": artin3, "kernel": ["t2"]},
            ),
            "--format",
            "json",
        )
    )
    names = {b["name"] for b in payload["witness"]["cone_basis"]}
    assert "t2'" in names
    assert payload["witness"]["kernel_acyclic"] is False  # classical kernel

    # exp-der: dual numbers, d(u) = u (x) t
    out = run_cli(
        "exp-der",
        "--input",
        write(
            "expder.json",
            {
                "kind": "exp_derivation",
                "algebra": {
                    "basis": [
                        {"name": "one", "degree": 0},
                        {"name": "u", "degree": 0},
                    ],
                    "unit": "one",
                    "product": [
                        {"left": "u", "right": "u", "value": []}
                    ],
                },
                "base": {
                    "kind": "artin_dg",
                    "basis": [{"name": "t", "degree": 0}],
                    "product": [{"left": "t", "right": "t", "value": []}],
                },
                "derivation": [
                    {
                        "from": "u",
                        "value": [{"r": "u", "a": "t", "coeff": "1"}],
                    }
                ],
            },
        ),
    )
    assert "[PASS]" in out

    # homotopy-eval: the contracting homotopy on a two-term acyclic algebra
    payload = json.loads(
        run_cli(
            "homotopy-eval",
            "--input",
            write(
                "homotopy.json",
                {
                    "kind": "homotopy",
                    "source": {
                        "kind": "artin_dg",
                        "basis": [
                            {"name": "v", "degree": 1},
                            {"name": "dv", "degree": 2},
                        ],
                        "differential": [
                            {"from": "v", "value": [{"basis": "dv", "coeff": "1"}]}
                        ],
                    },
                    "target": {
                        "kind": "artin_dg",
                        "basis": [
                            {"name": "v", "degree": 1},
                            {"name": "dv", "degree": 2},
                        ],
                        "differential": [
                            {"from": "v", "value": [{"basis": "dv", "coeff": "1"}]}
                        ],
                    },
                    "entries": [
                        {
                            "from": "v",
                            "value": [
                                {"basis": "v", "t_power": 1, "coeff": "1"}
                            ],
                        },
                        {
                            "from": "dv",
                            "value": [
                                {"basis": "dv", "t_power": 1, "coeff": "1"},
                                {"basis": "v", "t_power": 0, "dt": True, "coeff": "-1"},
                            ],
                        },
                    ],
                    "eval_at": "0",
                },
            ),
            "--format",
            "json",
        )
    )
    assert payload["status"] == "pass"
    assert payload["witness"]["map"]["v"] == []  # evaluation at 0 kills it

    # dsw + friedrichs on x (x) y
    tensor = {
        "kind": "tensor_poly",
        "generators": ["x", "y"],
        "truncation": 4,
        "terms": [{"word": ["x", "y"], "coeff": "1"}],
    }
    payload = json.loads(
        run_cli("dsw", "--input", write("dsw.json", tensor), "--format", "json")
    )
    got = {tuple(t["word"]): t["coeff"] for t in payload["witness"]["projection"]}
    assert got == {("x", "y"): "1/2", ("y", "x"): "-1/2"}
    run_cli("friedrichs", "--input", write("fr.json", tensor), expect=1)
    lie = {
        "kind": "tensor_poly",
        "generators": ["x", "y"],
        "truncation": 4,
        "terms": [
            {"word": ["x", "y"], "coeff": "1"},
            {"word": ["y", "x"], "coeff": "-1"},
        ],
    }
    run_cli("friedrichs", "--input", write("lie.json", lie))

    # coder / comorph
    basis4 = [
        {"name": "a", "degree": 1},
        {"name": "b", "degree": 2},
        {"name": "c", "degree": 1},
        {"name": "d", "degree": 0},
    ]
    run_cli(
        "coder",
        "--input",
        write(
            "coder.json",
            {
                "kind": "coderivation",
                "basis": basis4,
                "degree": 1,
                "components": [
                    {
                        "arity": 1,
                        "entries": [
                            {"word": ["a"], "value": [{"basis": "b", "coeff": "1"}]}
                        ],
                    }
                ],
            },
        ),
    )
    run_cli(
        "comorph",
        "--input",
        write(
            "comorph.json",
            {
                "kind": "comorphism",
                "source_basis": basis4,
                "target_basis": basis4,
                "components": [
                    {
                        "arity": 1,
                        "entries": [
                            {"word": ["a"], "value": [{"basis": "a", "coeff": "2"}]}
                        ],
                    }
                ],
            },
        ),
    )

    # check-linfty and from-dgla and linfty-morphism
    linfty = {
        "kind": "linfty",
        "convention": "unsuspended",
        "basis": [{"name": "x", "degree": 1}, {"name": "y", "degree": 2}],
        "brackets": {
            "2": [
                {"word": ["x", "x"], "value": [{"basis": "y", "coeff": "1"}]}
            ]
        },
    }
    run_cli("check-linfty", "--input", write("linfty.json", linfty))
    run_cli("from-dgla", "--input", write("fd.json", dgla))
    run_cli(
        "linfty-morphism",
        "--input",
        write(
            "lmor.json",
            {
                "kind": "linfty_morphism",
                "source": linfty,
                "target": linfty,
                "components": [
                    {
                        "arity": 1,
                        "entries": [
                            {"word": ["x"], "value": [{"basis": "x", "coeff": "1"}]},
                            {"word": ["y"], "value": [{"basis": "y", "coeff": "1"}]},
                        ],
                    }
                ],
            },
        ),
    )

    # mc-linfty: zero element of the structure above is Maurer-Cartan
    run_cli(
        "mc-linfty",
        "--input",
        write(
            "mcl.json",
            {
                "kind": "mc_linfty_problem",
                "structure": linfty,
                "base": artin3,
                "element": [],
            },
        ),
    )
