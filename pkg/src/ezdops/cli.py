"""Command-line front end: run job files, single commands, the worked
example, and the certificate verifier.

    ezdops run JOB [--seed N] [--output FILE]
    ezdops reproduce-example [--dmax N] [--f POLY]
    ezdops verify REPORT.json
    ezdops check ezd S f g [--job JOB]
    ezdops ann g in R [--job JOB]
    ezdops resolve R / y --hmax 3 --dmax 10 [--job JOB]
    ezdops operators build F pair f,g z t [--job JOB]
    ezdops homotopy check phi --window 0:3 [--job JOB]

Single commands run against the declarations of ``--job`` (default: the
shipped example).  JSON goes to stdout, a short summary to stderr.

Exit codes: 0 verdicts reached (including "not null-homotopic"), 1 a
reproduction item or certificate failed, 2 usage, input or math errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from importlib import resources

from . import __version__
from .certificates import SCHEMA, cmap_to_json, complex_to_json, ring_to_json, verify_report
from .chain_complex import FreeMap, GradedComplex, GradedFreeModule
from .homotopy import HomotopyProblem, null_homotopy
from .jobfile import Command, ComplexDecl, ElemDecl, JobError, QuotientDecl, RingDecl, parse_jobfile
from .operators import operator_pipeline
from .reproduce import reproduce_example
from .resolution import ModulePresentation, minimal_resolution
from .ring import annihilator, check_exact_pair, make_ring, quotient_by

__all__ = ["main", "Session", "run_job", "example_job_text"]

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


class CommandError(RuntimeError):
    def __init__(self, module, msg):
        super().__init__(f"[{module}] {msg}")
        self.module = module


def example_job_text():
    return resources.files("ezdops").joinpath("data/example_s4.job").read_text()


def default_seed():
    try:
        return int(os.environ.get("EZDOPS_SEED", "0"))
    except ValueError:
        return 0


class Session:
    """Executes statements in order, keeping the named objects."""

    def __init__(self, seed=None):
        self.seed = default_seed() if seed is None else seed
        self.rings = {}
        self.elems = {}
        self.complexes = {}
        self.maps = {}  # name -> (ComplexMap, complex name)

    # -- lookups
    def ring(self, name):
        return self.rings[name]

    def element(self, token, ring):
        if token in self.elems:
            return ring.elem(self.elems[token].rep)
        return ring.elem(token)

    # -- declarations
    def declare(self, stmt):
        if isinstance(stmt, RingDecl):
            names = [v for v, _ in stmt.vars]
            degs = [d for _, d in stmt.vars]
            self.rings[stmt.name] = make_ring(names, degs, stmt.relations, stmt.graded, name=stmt.name)
        elif isinstance(stmt, ElemDecl):
            R = self.rings[stmt.ring]
            self.elems[stmt.name] = R.elem(stmt.poly)
        elif isinstance(stmt, QuotientDecl):
            S = self.rings[stmt.ring]
            self.rings[stmt.name] = quotient_by(S, self.element(stmt.elem, S), stmt.name)
        elif isinstance(stmt, ComplexDecl):
            R = self.rings[stmt.ring]
            mods = {i: GradedFreeModule(tw, R) for i, tw in stmt.modules}
            deg = 0 if R.graded else None
            diffs = {i: FreeMap(mods[i], mods[i - 1], rows, deg, R) for i, rows in stmt.maps}
            try:
                self.complexes[stmt.name] = GradedComplex(R, mods, diffs, bounded_below=True, name=stmt.name)
            except ValueError as e:
                raise CommandError("chain_complex", f"complex {stmt.name}: {e}") from e
        else:
            raise TypeError(stmt)

    # -- commands
    def execute(self, cmd):
        t0 = time.time()
        handler = {
            "check ezd": self._check_ezd,
            "ann": self._ann,
            "resolve": self._resolve,
            "operators build": self._operators,
            "homotopy check": self._homotopy,
            "reproduce-example": self._reproduce,
        }[cmd.kind]
        out = handler(cmd)
        out = {"command": cmd.to_text(), **out, "seconds": round(time.time() - t0, 4)}
        return out

    def _check_ezd(self, cmd):
        S = self.ring(cmd.args[0])
        x, y = self.element(cmd.args[1], S), self.element(cmd.args[2], S)
        rep = check_exact_pair(S, x, y)
        cert = {"kind": "exact_pair", "ring": ring_to_json(S), "x": str(x), "y": str(y), "exact": rep.exact}
        return {"verdict": rep.exact, **rep.to_json(), "certificate": cert}

    def _ann(self, cmd):
        R = self.ring(cmd.args[1])
        a = self.element(cmd.args[0], R)
        gens = annihilator(R, a)
        g = [str(e) for e in gens]
        cert = {"kind": "annihilator", "ring": ring_to_json(R), "element": str(a), "generators": g}
        return {"verdict": g, "certificate": cert}

    def _resolve(self, cmd):
        R = self.ring(cmd.args[0])
        target = cmd.args[1]
        if target.startswith("["):
            M = _matrix_presentation(R, target)
        else:
            M = ModulePresentation.cyclic(R, [self.element(target, R)])
        res = minimal_resolution(R, M, cmd.option("hmax"), cmd.option("dmax"))
        name = cmd.option("as")
        if name:
            res.complex.name = name
            self.complexes[name] = res.complex
        cert = {"kind": "resolution", "ring": ring_to_json(R), "complex": complex_to_json(res.complex)}
        verdict = "certified" if all(res.certified.values()) else "uncertified"
        return {"verdict": verdict, "betti": res.to_json(), "certificate": cert}

    def _operators(self, cmd):
        cx, xt, yt, zs = cmd.args
        F = self.complexes[cx]
        R = F.ring
        S = R.cover
        if S is None:
            raise CommandError("operators", f"complex {cx} is not over a quotient ring")
        x, y = self.element(xt, S), self.element(yt, S)
        if R.modulus is None or S.reduce(R.modulus.rep) != x.rep:
            raise CommandError("operators", f"{cx} is not over {S.name}/({xt})")
        policy = cmd.option("lift", "canonical")
        seed = cmd.option("seed", self.seed)
        B = operator_pipeline(F, S, x, y, [(z, self.element(z, R)) for z in zs], policy, seed)
        for z in zs:
            self.maps[f"psi_{z}"] = self.maps[f"{cx}.psi_{z}"] = (B.psi_z[z], cx)
        self.maps["phi"] = self.maps[f"{cx}.phi"] = (B.phi, cx)
        data = {
            "psi_tilde": cmap_to_json(B.psi_tilde),
            "phi_tilde": cmap_to_json(B.phi_tilde),
            "psi": {f"psi_{z}": cmap_to_json(m) for z, m in B.psi_z.items()},
            "phi": cmap_to_json(B.phi),
            "warnings": B.warnings,
        }
        cert = {
            "kind": "operators",
            "S": ring_to_json(S),
            "x": str(x),
            "y": str(y),
            "lifted": complex_to_json(B.lifted.tilde),
            "psi_tilde": data["psi_tilde"],
            "phi_tilde": data["phi_tilde"],
            "z": {z: str(e) for z, e in B.z_elems.items()},
        }
        return {"verdict": B.contracts(), "lift": policy, "seed": seed if policy == "randomized" else None, **data, "certificate": cert}

    def _homotopy(self, cmd):
        name = cmd.args[0]
        g, cx = self.maps[name]
        a, b = (int(v) for v in cmd.option("window").split(":"))
        conv = cmd.option("convention", "hom")
        cert = null_homotopy(HomotopyProblem(g, (a, b), conv))
        data = cert.to_json()
        if cert.feasible:
            F = self.complexes[cx]
            data.update(kind="homotopy", ring=ring_to_json(F.ring), complex=complex_to_json(F), map=cmap_to_json(g))
        else:
            data["kind"] = "infeasibility"
        return {"verdict": data["verdict"], "map": name, "window": [a, b], "certificate": data}

    def _reproduce(self, cmd):
        rep = reproduce_example(cmd.option("dmax", 10), cmd.option("f"))
        return {"verdict": rep["ok"], **rep}


def _matrix_presentation(R, text):
    """``coker`` of a matrix whose rows index generators in degree 0."""
    rows = [[e.strip() for e in r.strip(" []").split(",")] for r in text.strip()[1:-1].split("]")]
    rows = [r for r in rows if any(r)]
    P = [[R.elem(e).rep for e in r] for r in rows]
    gens = GradedFreeModule((0,) * len(P), R)
    degs = []
    for j in range(len(P[0])):
        col = [P[i][j] for i in range(len(P)) if P[i][j]]
        degs.append(-col[0].degree() if col else 0)
    src = GradedFreeModule(degs, R)
    return ModulePresentation(gens, FreeMap(src, gens, P, 0, R))


def _summary(entry):
    v = entry.get("verdict")
    if "betti" in entry:
        v = "; ".join(
            f"step {s['step']}: {len(s['twists'])} gens ({s['status']})" for s in entry["betti"]["steps"]
        )
    elif isinstance(v, dict):
        v = "all contracts hold" if all(v.values()) else "contract failure"
    elif isinstance(v, list):
        v = "(" + ", ".join(v) + ")"
    return f"{entry['command']}: {v}"


def _report(entries, ok=True, error=None):
    out = {"schema": SCHEMA, "tool_version": __version__, "ok": ok, "commands": entries}
    if error is not None:
        out["error"] = error
    return out


def run_job(job, seed=None, only=None):
    """Run a parsed job.  With ``only`` set, every declaration and every
    binding command (``operators build``, ``resolve ... as``) runs silently
    and only the report for ``only`` is returned."""
    sess = Session(seed)
    entries = []
    status = EXIT_OK
    for stmt in job.statements:
        if not isinstance(stmt, Command):
            sess.declare(stmt)
            continue
        binding = stmt.kind == "operators build" or (stmt.kind == "resolve" and stmt.option("as"))
        if only is not None and stmt is not only:
            if binding:
                sess.execute(stmt)
            continue
        entry = sess.execute(stmt)
        entries.append(entry)
        if stmt.kind == "reproduce-example" and not entry["ok"]:
            status = EXIT_FAIL
    return entries, status


def _emit(report, output=None):
    text = json.dumps(report, indent=2, sort_keys=False, default=str)
    if output:
        with open(output, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _run_text(text, seed, output, only_line=None):
    job = parse_jobfile(text)
    only = None
    if only_line is not None:
        only = job.statements[-1]
        if not isinstance(only, Command):
            raise JobError("expected a command")
    entries, status = run_job(job, seed, only)
    report = _report(entries, ok=status == EXIT_OK)
    _emit(report, output)
    for e in entries:
        print(_summary(e), file=sys.stderr)
        if e["command"].startswith("reproduce-example"):
            for it in e["items"]:
                print(f"  [{it['status']}] {it['item']}", file=sys.stderr)
    return status


def _cmd_verify(path):
    with open(path) as fh:
        report = json.load(fh)
    results = verify_report(report)
    for p, ok in results:
        print(f"[{'ok' if ok else 'FAILED'}] {p}", file=sys.stderr)
    _emit({"schema": SCHEMA, "verified": [{"path": p, "ok": ok} for p, ok in results], "ok": all(ok for _, ok in results)})
    return EXIT_OK if all(ok for _, ok in results) else EXIT_FAIL


def _strip_opts(argv, names):
    """Pull ``--name value`` pairs for ``names`` out of ``argv``."""
    found, rest = {}, []
    k = 0
    while k < len(argv):
        a = argv[k]
        key = a[2:].split("=", 1)[0] if a.startswith("--") else None
        if key in names:
            if "=" in a:
                found[key] = a.split("=", 1)[1]
                k += 1
            else:
                if k + 1 >= len(argv):
                    raise JobError(f"--{key} needs a value")
                found[key] = argv[k + 1]
                k += 2
            continue
        rest.append(a)
        k += 1
    return found, rest


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] in ("-h", "--help"):
        print(__doc__.strip(), file=sys.stderr)
        return EXIT_OK if argv else EXIT_ERROR
    if argv[0] in ("--version", "-V"):
        print(__version__)
        return EXIT_OK
    try:
        head = argv[0]
        if head == "run":
            p = argparse.ArgumentParser(prog="ezdops run")
            p.add_argument("job")
            p.add_argument("--seed", type=int)
            p.add_argument("--output", "-o")
            a = p.parse_args(argv[1:])
            with open(a.job) as fh:
                return _run_text(fh.read(), a.seed, a.output)
        if head == "verify":
            p = argparse.ArgumentParser(prog="ezdops verify")
            p.add_argument("report")
            a = p.parse_args(argv[1:])
            return _cmd_verify(a.report)
        if "-h" in argv[1:] or "--help" in argv[1:]:
            usage = [l.strip() for l in __doc__.splitlines() if l.strip().startswith(f"ezdops {head}")]
            if not usage:
                print(f"ezdops: unknown command {head!r}", file=sys.stderr)
                return EXIT_ERROR
            print("usage: " + "\n       ".join(usage), file=sys.stderr)
            return EXIT_OK
        opts, rest = _strip_opts(argv, {"job", "seed", "output"})
        seed = int(opts["seed"]) if "seed" in opts else None
        if head == "reproduce-example":
            line = " ".join(rest)
            return _run_text(line + "\n", seed, opts.get("output"))
        if head in ("check", "ann", "resolve", "operators", "homotopy"):
            base = example_job_text()
            if "job" in opts:
                with open(opts["job"]) as fh:
                    base = fh.read()
            base_job = parse_jobfile(base)
            decls = "\n".join(s.to_text() for s in base_job.statements)
            text = decls + "\n" + " ".join(rest) + "\n"
            return _run_text(text, seed, opts.get("output"), only_line=True)
        print(f"ezdops: unknown command {head!r}", file=sys.stderr)
        return EXIT_ERROR
    except SystemExit as e:
        return EXIT_ERROR if e.code else EXIT_OK
    except JobError as e:
        print(f"ezdops: [jobfile] {e}", file=sys.stderr)
        _emit(_report([], ok=False, error=f"[jobfile] {e}"))
        return EXIT_ERROR
    except CommandError as e:
        print(f"ezdops: {e}", file=sys.stderr)
        _emit(_report([], ok=False, error=str(e)))
        return EXIT_ERROR
    except (ValueError, ArithmeticError, AssertionError, KeyError, OSError) as e:
        mod = type(e).__module__.split(".")[-1] if type(e).__module__.startswith("ezdops") else "runtime"
        print(f"ezdops: [{mod}] {type(e).__name__}: {e}", file=sys.stderr)
        _emit(_report([], ok=False, error=f"[{mod}] {e}"))
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
