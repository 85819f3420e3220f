"""Config-driven command line front end.

The config is an INI file (``key = value`` sections)::

    [run]
    seed = 7
    budget = 1000

    [system]
    kind = polynomial
    n = 2
    domain = [0, 10]

    [function f]
    kind = polynomial
    coeffs = 0, 0, 1

    [task convex]
    check = omega_convex
    function = f

Rational literals such as ``1/3`` stay exact from the config to the JSON
report.  Exit codes: 0 all passed, 1 something refuted or violated, 2 something
indeterminate, 3 configuration error.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import json
import os
import re
import sys
from fractions import Fraction
from typing import Optional

from . import algebra, certify, identities, sampling
from .det import Mode
from .funcs import ONE, Exponential, Expression, FuncHandle, Polynomial, Product, Tabulated
from .report import Certificate, Verdict
from .scalars import exact_str, is_exact, parse_scalar, to_float
from .systems import (Interval, extend_with, extend_with_power, is_positive_chebyshev, make_polynomial_system,
                      make_weighted_system, ChebSystem)

EXIT_OK, EXIT_FAILED, EXIT_INDETERMINATE, EXIT_CONFIG = 0, 1, 2, 3


class ConfigError(Exception):
    """Invalid configuration; carries a line reference when one is known."""

    def __init__(self, message: str, line: Optional[int] = None, path: str = ""):
        self.line = line
        self.path = path
        super().__init__(message)

    def __str__(self):
        where = f"{self.path}:{self.line}: " if self.line else (f"{self.path}: " if self.path else "")
        return f"{where}{self.args[0]}"


# -- CSV ----------------------------------------------------------------------

def _read_rows(path: str) -> list[list[str]]:
    try:
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    except OSError as exc:
        raise ConfigError(f"cannot read CSV {path}: {exc.strerror}") from None
    if rows and rows[0][0].strip().lower() in ("x", "t"):
        rows = rows[1:]
    return rows


def ingest_csv(path: str):
    """Read ``x,value`` rows.  Equally spaced abscissae give a ``GridFunction``,
    otherwise a tabulated handle.  Any decimal literal forces float mode."""
    rows = _read_rows(path)
    if not rows:
        raise ConfigError(f"{path}: no data rows")
    xs, ys = [], []
    for i, row in enumerate(rows, start=1):
        if len(row) != 2:
            raise ConfigError(f"{path}: row {i} has {len(row)} columns, expected 2 (x, value)")
        try:
            xs.append(parse_scalar(row[0]))
            ys.append(parse_scalar(row[1]))
        except ValueError as exc:
            raise ConfigError(f"{path}: row {i}: {exc}") from None
    if not all(is_exact(v) for v in xs + ys):
        xs, ys = [to_float(v) for v in xs], [to_float(v) for v in ys]
    for i, (a, b) in enumerate(zip(xs, xs[1:]), start=2):
        if not a < b:
            raise ConfigError(f"{path}: abscissae must be strictly increasing (row {i})")
    try:
        return identities.GridFunction.from_pairs(xs, ys)
    except ValueError:
        return Tabulated(tuple(xs), tuple(ys), name=os.path.basename(path))


def as_tabulated(data, name: str = "tabulated") -> Tabulated:
    if isinstance(data, Tabulated):
        return data
    return Tabulated(tuple(data.points), tuple(data.values), name=name)


def _flatten_config(cfg: dict) -> list[tuple[str, object]]:
    out = []
    for key, val in cfg.items():
        if isinstance(val, (tuple, list)):
            for i, v in enumerate(val):
                out.append((f"{key}_{i}", v))
        else:
            out.append((key, val))
    return out


def emit_plot_data(report: Certificate, path: str) -> None:
    """One row per evaluated configuration: coordinates, value, bound, violation flag."""
    records = report.records
    keys: list[str] = []
    for r in records:
        for k, _ in _flatten_config(r.config):
            if k not in keys:
                keys.append(k)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["index"] + keys + ["value", "value_exact", "abs_error_bound", "violated"])
        for i, r in enumerate(records):
            flat = dict(_flatten_config(r.config))
            coords = [repr(to_float(flat[k])) if k in flat else "" for k in keys]
            w.writerow([i] + coords + [repr(to_float(r.value.value)), exact_str(r.value.value),
                                       repr(float(r.value.abs_error_bound)), int(r.violated)])


# -- config parsing -----------------------------------------------------------

def _line_index(text: str) -> dict:
    """(section, key) -> line number; (section, None) for headers."""
    index = {}
    section = None
    for no, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        m = re.fullmatch(r"\[([^\]]+)\]", s)
        if m:
            section = m.group(1).strip()
            index[(section, None)] = no
        elif section and s and s[0] not in "#;" and ("=" in s or ":" in s):
            key = re.split(r"[=:]", s, 1)[0].strip().lower()
            index[(section, key)] = no
    return index


class _Config:
    def __init__(self, path: str):
        self.path = path
        self.base_dir = os.path.dirname(os.path.abspath(path))
        try:
            with open(path) as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc.strerror}", path=path) from None
        self.lines = _line_index(text)
        self.parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"), interpolation=None)
        try:
            self.parser.read_string(text, source=path)
        except configparser.ParsingError as exc:
            line = exc.errors[0][0] if exc.errors else None
            raise ConfigError(f"malformed line {exc.errors[0][1] if exc.errors else ''}", line, path) from None
        except configparser.Error as exc:
            line = getattr(exc, "lineno", None)
            raise ConfigError(exc.message.splitlines()[0] if hasattr(exc, "message") else str(exc),
                              line, path) from None

    def error(self, message: str, section: str, key: Optional[str] = None) -> ConfigError:
        line = self.lines.get((section, key)) or self.lines.get((section, None))
        return ConfigError(f"[{section}] {message}", line, self.path)

    def get(self, section: str, key: str, default=None, required: bool = False):
        if self.parser.has_option(section, key):
            return self.parser.get(section, key).strip()
        if required:
            raise self.error(f"missing required key '{key}'", section)
        return default

    def scalar(self, section: str, key: str, default=None, required: bool = False):
        raw = self.get(section, key, None, required)
        if raw is None:
            return default
        try:
            return parse_scalar(raw)
        except (ValueError, ZeroDivisionError) as exc:
            raise self.error(f"bad number for '{key}': {exc}", section, key) from None

    def scalars(self, section: str, key: str, default=None, required: bool = False) -> Optional[list]:
        raw = self.get(section, key, None, required)
        if raw is None:
            return default
        try:
            return [parse_scalar(p) for p in raw.split(",") if p.strip()]
        except (ValueError, ZeroDivisionError) as exc:
            raise self.error(f"bad number list for '{key}': {exc}", section, key) from None

    def matrix(self, section: str, key: str) -> Optional[list]:
        raw = self.get(section, key)
        if raw is None:
            return None
        try:
            return [[parse_scalar(p) for p in row.replace(",", " ").split()] for row in raw.split(";")]
        except (ValueError, ZeroDivisionError) as exc:
            raise self.error(f"bad matrix for '{key}': {exc}", section, key) from None

    def integer(self, section: str, key: str, default=None, required: bool = False):
        raw = self.get(section, key, None, required)
        if raw is None:
            return default
        try:
            return int(raw)
        except ValueError:
            raise self.error(f"'{key}' must be an integer, got {raw!r}", section, key) from None

    def flag(self, section: str, key: str, default: bool = False) -> bool:
        raw = self.get(section, key)
        if raw is None:
            return default
        if raw.lower() in ("1", "true", "yes", "on"):
            return True
        if raw.lower() in ("0", "false", "no", "off"):
            return False
        raise self.error(f"'{key}' must be a boolean", section, key)

    def resolve_path(self, p: str) -> str:
        return p if os.path.isabs(p) else os.path.join(self.base_dir, p)

    def sections(self, prefix: str) -> list[tuple[str, str]]:
        out = []
        for s in self.parser.sections():
            parts = s.split(None, 1)
            if parts[0] == prefix:
                if len(parts) != 2:
                    raise self.error(f"section needs a name: [{prefix} NAME]", s)
                out.append((s, parts[1].strip()))
        return out


def _handle_from_csv(cfg: _Config, section: str, key: str) -> FuncHandle:
    path = cfg.resolve_path(cfg.get(section, key, required=True))
    try:
        return as_tabulated(ingest_csv(path), name=os.path.basename(path))
    except ConfigError as exc:
        raise cfg.error(str(exc), section, key) from None


def _build_system(cfg: _Config) -> ChebSystem:
    sec = "system"
    if not cfg.parser.has_section(sec):
        raise ConfigError("missing [system] section", path=cfg.path)
    kind = cfg.get(sec, "kind", "polynomial").lower()
    try:
        domain = Interval.parse(cfg.get(sec, "domain", required=True))
    except ValueError as exc:
        raise cfg.error(str(exc), sec, "domain") from None
    try:
        if kind == "polynomial":
            return make_polynomial_system(cfg.integer(sec, "n", required=True), domain)
        if kind == "weighted":
            rate = cfg.scalar(sec, "weight_rate", None)
            weight = ONE if rate is None or rate == 0 else Exponential(rate)
            m = cfg.matrix(sec, "matrix")
            if m is None:
                n = cfg.integer(sec, "n", required=True)
                m = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
            return make_weighted_system(weight, m, domain)
        if kind == "tabulated":
            paths = [p.strip() for p in cfg.get(sec, "components", required=True).split(",")]
            comps = []
            for p in paths:
                try:
                    comps.append(as_tabulated(ingest_csv(cfg.resolve_path(p)), name=p))
                except ConfigError as exc:
                    raise cfg.error(str(exc), sec, "components") from None
            return ChebSystem(tuple(comps), domain, None, name="tabulated")
    except ValueError as exc:
        raise cfg.error(str(exc), sec, "kind") from None
    raise cfg.error(f"unknown system kind {kind!r}", sec, "kind")


def _build_module(cfg: _Config, domain: Interval) -> Optional[algebra.RationalModule]:
    if not cfg.parser.has_section("module"):
        return None
    gens = cfg.scalars("module", "generators", required=True)
    try:
        return algebra.RationalModule(tuple(gens), domain)
    except ValueError as exc:
        raise cfg.error(str(exc), "module", "generators") from None


def _genpoly(cfg: _Config, sec: str, module) -> algebra.GenPolynomial:
    if module is None:
        raise cfg.error("needs a [module] section", sec)
    tensors = [cfg.scalar(sec, "constant", Fraction(0))]
    linear = cfg.scalars(sec, "linear")
    tensors.append(linear if linear is not None else 0)
    quad = cfg.matrix(sec, "quadratic")
    tensors.append(quad if quad is not None else 0)
    try:
        return algebra.GenPolynomial(module, tensors)
    except ValueError as exc:
        raise cfg.error(str(exc), sec) from None


def _build_functions(cfg: _Config, system: ChebSystem, module) -> dict:
    funcs: dict[str, FuncHandle] = {}
    for sec, name in cfg.sections("function"):
        kind = cfg.get(sec, "kind", required=True).lower()
        try:
            if kind == "polynomial":
                funcs[name] = Polynomial(tuple(cfg.scalars(sec, "coeffs", required=True)))
            elif kind == "expression":
                funcs[name] = Expression(cfg.get(sec, "expr", required=True), cfg.get(sec, "var", "x"))
            elif kind == "exponential":
                funcs[name] = Exponential(cfg.scalar(sec, "rate", required=True), cfg.scalar(sec, "coeff", 1))
            elif kind == "weighted":
                inner = Polynomial(tuple(cfg.scalars(sec, "coeffs", required=True)))
                funcs[name] = inner if system.factorized is None or system.weight == ONE else \
                    Product((inner, system.weight))
            elif kind == "csv":
                funcs[name] = _handle_from_csv(cfg, sec, "path")
            elif kind in ("additive", "genpoly"):
                if kind == "additive":
                    if module is None:
                        raise cfg.error("needs a [module] section", sec)
                    amap = algebra.AdditiveMap(module, tuple(cfg.scalars(sec, "values", required=True)))
                    g = algebra.GenPolynomial.from_additive(amap)
                else:
                    g = _genpoly(cfg, sec, module)
                if cfg.flag(sec, "weighted", True) and system.factorized is not None:
                    funcs[name] = algebra.build_jensen_affine(system, g)
                else:
                    funcs[name] = algebra.ModuleFunction(g)
            elif kind == "sum":
                parts = [p.strip() for p in cfg.get(sec, "of", required=True).split(",")]
                missing = [p for p in parts if p not in funcs]
                if missing:
                    raise cfg.error(f"undeclared function {missing[0]!r}", sec, "of")
                total = funcs[parts[0]]
                for p in parts[1:]:
                    total = total + funcs[p]
                funcs[name] = total
            else:
                raise cfg.error(f"unknown function kind {kind!r}", sec, "kind")
        except (ValueError, SyntaxError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise cfg.error(str(exc), sec) from None
    return funcs


# -- tasks --------------------------------------------------------------------

CHECKS = ("chebyshev", "t_omega_convex", "omega_jensen", "omega_convex", "wright", "factorization",
          "chwc_ratio", "chwc_perm_sum", "fit_affine", "qp", "extend")


class _Task:
    def __init__(self, cfg: _Config, sec: str, name: str, funcs: dict, args):
        self.cfg, self.sec, self.name = cfg, sec, name
        self.check = cfg.get(sec, "check", required=True).lower()
        if self.check not in CHECKS:
            raise cfg.error(f"unknown check {self.check!r}; expected one of {', '.join(CHECKS)}", sec, "check")
        self.funcs = funcs
        fname = cfg.get(sec, "function")
        needs_f = self.check not in ("chebyshev", "factorization")
        if needs_f and fname is None:
            raise cfg.error("missing required key 'function'", sec)
        if fname is not None and fname not in funcs:
            raise cfg.error(f"undeclared function {fname!r}", sec, "function")
        self.f = funcs.get(fname) if fname else None
        seed = args.seed if args.seed is not None else cfg.integer(sec, "seed", cfg.integer("run", "seed"))
        if seed is None and self.check not in ("fit_affine",):
            raise cfg.error("a seed is required (task 'seed', [run] seed or --seed)", sec)
        self.seed = seed if seed is not None else 0
        budget = args.budget if args.budget is not None else cfg.integer(sec, "samples",
                                                                        cfg.integer("run", "budget", 1000))
        if budget < 1:
            raise cfg.error("sample budget must be >= 1", sec, "samples")
        self.budget = budget
        mode = args.mode or cfg.get(sec, "mode") or cfg.get("run", "mode")
        try:
            self.mode = Mode.coerce(mode)
        except ValueError:
            raise cfg.error(f"mode must be exact or float, got {mode!r}", sec, "mode") from None
        self.q_max = cfg.integer(sec, "q_max", cfg.integer("run", "q_max", 8))
        self.source = (cfg.get(sec, "configs") or "sampled").lower()
        if self.source not in ("sampled", "module", "grid"):
            raise cfg.error("configs must be sampled, module or grid", sec, "configs")
        for key in ("derivative", "extension"):
            ref = cfg.get(sec, key)
            if ref is not None and ref not in funcs and not (key == "extension" and ref == "power"):
                raise cfg.error(f"undeclared function {ref!r}", sec, key)


def _exact_sampling(task: _Task, system, extra=()) -> bool:
    if task.mode is Mode.FLOAT:
        return False
    handles = list(system.components) + [h for h in extra if h is not None]
    return all(h.exact_capable for h in handles)


def _need_module(task: _Task, module):
    if module is None:
        raise task.cfg.error("configs = module needs a [module] section", task.sec, "configs")
    return module


def _run_task(task: _Task, system: ChebSystem, module) -> Certificate:
    cfg, sec = task.cfg, task.sec
    n = system.dim
    dom = system.domain
    exact = _exact_sampling(task, system, [task.f])
    kw = dict(mode=task.mode, seed=task.seed)
    check = task.check
    affine = cfg.flag(sec, "affine")

    if check == "chebyshev":
        return is_positive_chebyshev(system, task.budget, task.seed, mode=task.mode, q_max=task.q_max)

    if check in ("omega_jensen", "t_omega_convex"):
        steps = cfg.scalars(sec, "steps") if check == "t_omega_convex" else [Fraction(1)] * n
        if check == "t_omega_convex" and steps is None:
            raise cfg.error("missing required key 'steps'", sec)
        span = sum(steps, Fraction(0)) if all(is_exact(s) for s in steps) else sum(map(float, steps))
        if task.source == "grid":
            hs = cfg.scalars(sec, "h", required=True)
            configs = sampling.equidistant_configs(dom, span, hs, cfg.scalar(sec, "x_step"))
            if not configs:
                raise cfg.error("grid produced no configurations", sec, "h")
        elif task.source == "module":
            if check != "omega_jensen":
                raise cfg.error("module configs are only defined for omega_jensen", sec, "configs")
            configs = algebra.module_jensen_configs(_need_module(task, module), dom, n, task.budget, task.seed)
        else:
            configs = sampling.sample_step_configs(dom, span, task.budget, task.seed, task.q_max, exact)
        cert = certify.check_t_omega_convex(system, task.f, steps, configs, affine=affine, **kw)
        cert.exhaustive = task.source == "grid"
        return cert

    if check == "omega_convex":
        if task.source == "module":
            tuples = algebra.module_simplex_tuples(_need_module(task, module), dom, n + 1, task.budget, task.seed)
        else:
            tuples = sampling.sample_simplex_tuples(dom, n + 1, task.budget, task.seed, task.q_max, exact,
                                                    support=_support(system, task.f))
        return certify.check_omega_convex(system, task.f, tuples, affine=affine, **kw)

    if check in ("wright", "chwc_perm_sum", "chwc_ratio"):
        ext = _extension(task, system)
        if check == "chwc_ratio":
            tuples = sampling.sample_simplex_tuples(dom, n + 1, task.budget, task.seed, task.q_max, exact)
            return identities.chwc_ratio_check(ext, task.f, tuples, **kw)
        if task.source == "module":
            configs = algebra.module_wright_configs(_need_module(task, module), dom, n, task.budget, task.seed)
        else:
            configs = sampling.sample_wright_configs(dom, n, task.budget, task.seed, task.q_max, exact)
        if check == "wright":
            return certify.check_wright(ext, task.f, configs, **kw)
        return identities.chwc_perm_sum_check(ext, task.f, configs, **kw)

    if check == "factorization":
        arity = n if task.f is None else n + 1
        tuples = sampling.sample_simplex_tuples(dom, arity, task.budget, task.seed, task.q_max, exact)
        return identities.factorization_check(system, task.f, tuples, rel_tol=1e-10, **kw)

    if check == "fit_affine":
        nodes = cfg.scalars(sec, "nodes", required=True)
        fit = identities.fit_omega_affine(system, task.f, nodes, grid_size=cfg.integer(sec, "grid", 100),
                                          mode=task.mode)
        return fit.report

    if check == "qp":
        deriv = task.funcs.get(cfg.get(sec, "derivative")) if cfg.get(sec, "derivative") else None
        rho_exact = task.mode is not Mode.FLOAT and task.f.exact_capable and \
            (deriv is None or deriv.exact_capable)
        triples = sampling.sample_qp_triples(dom, task.budget, task.seed, rho_exact,
                                             include_zero_u=cfg.flag(sec, "include_zero_u"))
        return identities.qp_equation_check(task.f, triples, derivative=deriv, domain=dom, **kw)

    if check == "extend":
        if task.f.support() is not None:
            tab = task.f
            grid = identities.GridFunction.from_pairs(list(tab.support()), [tab.evaluate(x, tab.exact_capable)
                                                                             for x in tab.support()])
        else:
            grid = identities.GridFunction.sample(task.f, dom, cfg.scalar(sec, "grid_step", required=True))
        _, report = identities.extend_from_dense_grid(system, grid, refine=task.budget, seed=task.seed,
                                                      eps=float(cfg.scalar(sec, "eps", 1e-10)))
        return report
    raise cfg.error(f"unhandled check {check!r}", sec, "check")


def _support(system, f):
    sup = system.support()
    fs = f.support() if f is not None else None
    if fs is None:
        return sup
    fs = tuple(x for x in fs if system.domain.contains(x))
    return fs if sup is None else tuple(sorted(set(sup) & set(fs)))


def _extension(task: _Task, system: ChebSystem):
    ref = task.cfg.get(task.sec, "extension", "power")
    if ref == "power":
        if system.factorized is None:
            raise task.cfg.error("extension = power needs a polynomial or weighted system", task.sec, "extension")
        return extend_with_power(system)
    if task.check != "wright":
        raise task.cfg.error("identity checks need extension = power", task.sec, "extension")
    return extend_with(system, task.funcs[ref], sample_budget=min(task.budget, 2000), seed=task.seed)


# -- entry points -------------------------------------------------------------

def _exit_code(verdicts) -> int:
    if any(v.failed for v in verdicts):
        return EXIT_FAILED
    if any(v is Verdict.INDETERMINATE for v in verdicts):
        return EXIT_INDETERMINATE
    return EXIT_OK


def _safe_name(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", name)


def run(config_path: str, out_dir: Optional[str] = None, mode: Optional[str] = None,
        seed: Optional[int] = None, budget: Optional[int] = None, stderr=None) -> int:
    """Execute every task in declaration order and write reports; returns the exit code."""
    stderr = stderr or sys.stderr
    args = argparse.Namespace(mode=mode, seed=seed, budget=budget)
    try:
        cfg = _Config(config_path)
        system = _build_system(cfg)
        module = _build_module(cfg, system.domain)
        funcs = _build_functions(cfg, system, module)
        tasks = [_Task(cfg, sec, name, funcs, args) for sec, name in cfg.sections("task")]
        if not tasks:
            raise ConfigError("no [task NAME] sections", path=config_path)
    except ConfigError as exc:
        print(f"config error: {exc}", file=stderr)
        return EXIT_CONFIG
    out_dir = out_dir or cfg.get("run", "out") or "reports"
    out_dir = out_dir if os.path.isabs(out_dir) else os.path.join(os.getcwd(), out_dir)
    os.makedirs(out_dir, exist_ok=True)
    summary = []
    verdicts = []
    for task in tasks:
        try:
            cert = _run_task(task, system, module)
        except ConfigError as exc:
            print(f"config error: {exc}", file=stderr)
            return EXIT_CONFIG
        except (ValueError, ArithmeticError) as exc:
            err = task.cfg.error(str(exc), task.sec)
            print(f"config error: {err}", file=stderr)
            return EXIT_CONFIG
        stem = _safe_name(task.name)
        with open(os.path.join(out_dir, f"{stem}.json"), "w") as fh:
            fh.write(cert.dumps() + "\n")
        emit_plot_data(cert, os.path.join(out_dir, f"{stem}.csv"))
        verdicts.append(cert.verdict)
        summary.append({"task": task.name, "check": task.check, "verdict": cert.verdict.value,
                        "samples": cert.samples, "violations": cert.violations, "report": f"{stem}.json"})
    code = _exit_code(verdicts)
    with open(os.path.join(out_dir, "summary.json"), "w") as fh:
        fh.write(json.dumps({"config": os.path.basename(config_path), "exit_code": code, "tasks": summary},
                            indent=2, sort_keys=True) + "\n")
    return code


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="chebconvex", description="Certify convexity with respect to "
                                     "Chebyshev systems from a config file.")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run every task of a config file")
    p_run.add_argument("config")
    p_run.add_argument("--mode", choices=["exact", "float"], type=str.lower)
    p_run.add_argument("--seed", type=int)
    p_run.add_argument("--out")
    p_run.add_argument("--budget", type=int)
    args = parser.parse_args(argv)
    if args.budget is not None and args.budget < 1:
        parser.error("--budget must be >= 1")
    return run(args.config, out_dir=args.out, mode=args.mode, seed=args.seed, budget=args.budget)


if __name__ == "__main__":
    sys.exit(main())
