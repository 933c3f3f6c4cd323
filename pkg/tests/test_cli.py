import json
import re

import pytest

from mcmv import cli
from mcmv.cli import ConfigError, EXAMPLE_CONFIGS, JobConfig, parse_config, run
from mcmv.zpoly import parse

from .helpers import VARS, poly


def config1(**over):
    base = dict(p=3, varnames=("X", "Y"), f_text="-5*X^3+9", g_text="-2*Y^3+9")
    base.update(over)
    return JobConfig(**base)


def test_parse_config_round_trip():
    cfg = parse_config(EXAMPLE_CONFIGS["1"])
    assert cfg.p == 3
    assert cfg.varnames == ("X", "Y")
    assert cfg.f_text == "-5*X^3+9"
    assert cfg.commands == ("classify", "closure", "resolution")


def test_parse_config_errors():
    with pytest.raises(ConfigError):
        parse_config("p = 3\n")  # missing keys
    with pytest.raises(ConfigError):
        parse_config(EXAMPLE_CONFIGS["1"] + "bogus = 1\n")
    with pytest.raises(ConfigError):
        parse_config('p = 3\nvars = [X]\nf = "X"\ng = "X"\ncommands = [dance]\n')


def test_parse_config_oracle_and_seed():
    cfg = parse_config(EXAMPLE_CONFIGS["1"] + "oracle = [3, 12]\nseed = 7\n")
    assert cfg.oracle == (3, 12)
    assert cfg.seed == 7


def test_run_classify_only():
    rep = run(config1(commands=("classify",)))
    assert rep.exit_code == 0
    sec = rep.tree["classification"]
    assert sec["label"] == "NotCM_GradeThree(i=1)"
    assert sec["fg_index"] == 1
    assert sec["q_class"] == "GradeThree"


def test_run_default_commands():
    rep = run(config1())
    assert rep.exit_code == 0
    assert rep.tree["closure"]["status"] == "ok"
    assert rep.tree["resolution"]["pd"] == 1
    assert rep.tree["resolution"]["nu"] == 10


def test_run_mcm_refusal_example2():
    cfg = JobConfig(p=3, varnames=("X", "Y"), f_text="-2*X^6+9",
                    g_text="4*X^3*Y^3+9", commands=("classify", "mcm"))
    rep = run(cfg)
    assert rep.exit_code == 0
    assert rep.tree["mcm"]["status"] == "refused"
    assert rep.tree["mcm"]["code"] == "OPEN_CASE"


def test_run_conductor_refusal():
    cfg = JobConfig(p=3, varnames=("X", "Y"), f_text="X^3+9",
                    g_text="Y^3+9", commands=("conductor",))
    rep = run(cfg)
    assert rep.exit_code == 0
    assert rep.tree["conductor"]["code"] == "NO_STATED_CONDUCTOR"


def test_report_polynomials_reparse():
    rep = run(config1(commands=("classify", "resolution")))
    # every quoted polynomial in the report parses back to the same value
    text = rep.to_text()
    quoted = re.findall(r'"([^"]*)"', text)
    assert quoted
    echo_f = parse(rep.tree["instance"]["f"].strip('"'), VARS)
    assert echo_f == poly("-5*X^3+9")
    for s in quoted:
        q = parse(s, VARS)
        assert parse(cli.to_string(q, VARS), VARS) == q
    psi = [parse(s.strip('"'), VARS) for s in rep.tree["resolution"]["psi"]]
    assert psi[-1] == poly("-3")
    assert psi[3] == poly("-X^2")


def test_report_deterministic():
    a = run(config1()).to_text()
    b = run(config1()).to_text()
    strip = lambda s: re.sub(r"timings:\n(  .*\n?)*", "", s)
    assert strip(a) == strip(b)


def test_report_json_tree():
    rep = run(config1(commands=("classify",)))
    tree = json.loads(rep.to_json())
    assert tree["classification"]["label"] == "NotCM_GradeThree(i=1)"


def test_main_example_materialization(tmp_path):
    out = tmp_path / "ex1.cfg"
    assert cli.main(["example", "1", "--out", str(out)]) == 0
    assert out.read_text() == EXAMPLE_CONFIGS["1"]


def test_main_exit_codes(tmp_path):
    cfg = tmp_path / "job.cfg"
    cfg.write_text('p = 3\nvars = [X, Y]\nf = "X^2+1"\ng = "Y^3+3"\n')
    assert cli.main(["run", str(cfg)]) == 2
    cfg.write_text('p = 3\nvars = [X, Y]\nf = "X^"\ng = "Y^3+3"\n')
    assert cli.main(["run", str(cfg)]) == 2
    cfg.write_text(EXAMPLE_CONFIGS["1"])
    out = tmp_path / "report.txt"
    assert cli.main(["run", str(cfg), "--commands", "classify", "--out", str(out)]) == 0
    assert "NotCM_GradeThree" in out.read_text()
