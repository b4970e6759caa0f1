"""Command-line entry point: ``arccurve <command> [options]``.

Results go to stdout (or ``--output``) as JSON; failures print a JSON error
object on stderr.  Exit codes: 0 ok, 1 verification failure, 2 usage error,
3 resource limit.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path as FsPath

from filelock import FileLock, Timeout

from . import __version__
from .classify import INCONCLUSIVE, classify_combinatorial, classify_topological
from .complex import (KINDS, SimplicialBall, automorphisms, build_ball, maximal_cliques)
from .coords import ArcClass, class_from_json
from .errors import ArcCurveError, ResourceLimit
from .intersect import IntersectionEngine
from .quasi import Path, rewrite_to_curve_path, verify_inequalities
from .registry import FlipRegistry, flip_ball
from .surface import Surface
from .triangulation import CODE_VERSION, base_triangulation

log = logging.getLogger("arccurve")

CACHE_ENV = "ARCCURVE_CACHE_DIR"


@dataclass(frozen=True)
class RunConfig:
    genus: int = 0
    punctures: int = 3
    radius: int = 2
    weight: int = 6
    samples: int = 50
    seed: int = 0
    jobs: int = 1
    cache_dir: str | None = None
    fmt: str = "json"

    def __post_init__(self):
        for name in ("genus", "punctures", "radius", "weight", "samples", "seed"):
            if getattr(self, name) < 0:
                raise UsageError(f"--{name} must be non-negative")
        if self.jobs < 1:
            raise UsageError("--jobs must be positive")
        if self.fmt not in ("json", "dot", "text"):
            raise UsageError("--format must be json, dot or text")

    @property
    def surface(self) -> Surface:
        return Surface(self.genus, self.punctures)

    def cache_root(self) -> FsPath:
        root = self.cache_dir or os.environ.get(CACHE_ENV) or FsPath.home() / ".cache" / "arccurve"
        return FsPath(root)


class UsageError(ArcCurveError):
    code = 2


class VerificationFailed(ArcCurveError):
    code = 1


# -- output ------------------------------------------------------------------------

def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_atomic(path, text: str) -> None:
    path = FsPath(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(text: str, output: str | None) -> None:
    if output:
        write_atomic(output, text)
    else:
        sys.stdout.write(text)


# -- cache -------------------------------------------------------------------------

class Cache:
    """JSON artifacts under a locked directory, each stored with its sha256.

    A payload whose digest does not match is treated as missing and rebuilt.
    """

    def __init__(self, root: FsPath):
        self.root = root
        self.root.mkdir(parents=True, exist_ok=True)
        self.lock = FileLock(str(root / ".lock"), timeout=60)

    def _path(self, key: str) -> FsPath:
        return self.root / f"{key}.json"

    def get(self, key: str) -> str | None:
        p = self._path(key)
        if not p.exists():
            return None
        try:
            record = json.loads(p.read_text())
            payload = record["payload"]
        except (OSError, ValueError, KeyError, TypeError):
            log.warning("cache entry %s is unreadable; rebuilding", p.name)
            return None
        if hashlib.sha256(payload.encode()).hexdigest() != record.get("sha256"):
            log.warning("cache entry %s failed its checksum; rebuilding", p.name)
            return None
        return payload

    def put(self, key: str, payload: str) -> None:
        record = {"sha256": hashlib.sha256(payload.encode()).hexdigest(), "payload": payload}
        write_atomic(self._path(key), json.dumps(record))

    def fetch(self, key: str, build) -> str:
        try:
            with self.lock:
                hit = self.get(key)
                if hit is None:
                    hit = build()
                    self.put(key, hit)
                return hit
        except Timeout as exc:
            raise ResourceLimit(f"cache directory {self.root} is locked by another process") from exc


def _cached(cfg: RunConfig, no_cache: bool, key: str, build) -> str:
    if no_cache:
        return build()
    return Cache(cfg.cache_root()).fetch(f"v{CODE_VERSION}-{__version__}-{key}", build)


# -- commands ----------------------------------------------------------------------

def cmd_surface_info(cfg, args):
    return dumps(cfg.surface.info())


def cmd_flip_ball(cfg, args):
    s = cfg.surface
    s.require_triangulable()
    key = f"flip-{s.g}-{s.n}-{cfg.radius}"
    return _cached(cfg, args.no_cache, key,
                   lambda: dumps(flip_ball(base_triangulation(s), cfg.radius).to_json()))


def _ball_from_args(cfg, args) -> SimplicialBall:
    if getattr(args, "ball", None):
        return SimplicialBall.from_json(FsPath(args.ball).read_text())
    s = cfg.surface
    key = f"ball-{s.g}-{s.n}-{args.kind}-{cfg.radius}-{cfg.weight}"
    text = _cached(cfg, args.no_cache, key, lambda: dumps(
        build_ball(s, args.kind, cfg.radius, cfg.weight, jobs=cfg.jobs).to_json()))
    return SimplicialBall.from_json(text)


def _registry_for(b: SimplicialBall) -> FlipRegistry:
    return flip_ball(base_triangulation(b.surface), int(b.bounds.get("radius", 0)))


def cmd_build_ball(cfg, args):
    b = _ball_from_args(cfg, args)
    if cfg.fmt == "dot":
        return _labelled(b).to_dot()
    return dumps(b.to_json())


def _labelled(b: SimplicialBall) -> SimplicialBall:
    if b.surface.is_triangulable and b.vertices:
        reg = _registry_for(b)
        b.labels = {i: classify_topological(v, reg).value for i, v in enumerate(b.vertices)}
    return b


def cmd_export(cfg, args):
    b = SimplicialBall.from_json(FsPath(args.ball).read_text())
    return _labelled(b).to_dot() if cfg.fmt == "dot" else dumps(b.to_json())


def cmd_classify(cfg, args):
    b = SimplicialBall.from_json(FsPath(args.ball).read_text())
    i = b.index_of(args.vertex)
    out = {"vertex": i, "class": b.vertices[i].to_json(), "complete": b.complete[i]}
    topo = None
    if args.method in ("topo", "both"):
        topo = classify_topological(b.vertices[i], _registry_for(b)).value
        out["topological"] = topo
    if args.method in ("comb", "both"):
        vd = classify_combinatorial(b, i)
        out["combinatorial"] = vd.to_json()
        if topo is not None and vd.label != INCONCLUSIVE:
            out["agree"] = out["combinatorial"]["label"] == topo
    text = dumps(out)
    if out.get("agree") is False:
        raise VerificationFailed(f"classifiers disagree on vertex {i}", text)
    return text


def cmd_maxsimplices(cfg, args):
    b = _ball_from_args(cfg, args)
    cliques = maximal_cliques(b)
    return dumps({"count": len(cliques), "cliques": [
        {"members": list(c.members), "size": c.size, "dim": c.dim,
         "curves": b.num_curves_in(c.members), "certified": c.certified, "confident": c.confident}
        for c in cliques]})


def cmd_automorphisms(cfg, args):
    b = _ball_from_args(cfg, args)
    g = automorphisms(b)
    return dumps({"order": g.order, "generators": [list(p) for p in g.generators]})


def cmd_selftest_s03(cfg, args):
    b = build_ball(Surface(0, 3), "AC", 3, 4, jobs=cfg.jobs)
    fv = b.f_vector()
    ok = fv == [6, 9, 4] and all(b.complete)
    text = dumps({"f_vector": fv, "expected": [6, 9, 4], "ok": ok})
    if not ok:
        raise VerificationFailed("S_(0,3) f-vector differs from (6, 9, 4)", text)
    return text


def cmd_rewrite_path(cfg, args):
    p = Path.from_json(json.loads(FsPath(args.input).read_text()))
    reg = flip_ball(base_triangulation(p.surface), cfg.radius)
    q = rewrite_to_curve_path(p, IntersectionEngine(reg))
    return dumps({"input_length": p.length, "output_length": q.length, "path": q.to_json()})


def cmd_verify_inequalities(cfg, args):
    rep = verify_inequalities(cfg.surface, samples=cfg.samples, radius=cfg.radius,
                              weight=cfg.weight, bound=args.bound, seed=cfg.seed,
                              jobs=cfg.jobs).to_json()
    text = dumps(rep)
    if rep["failures"]:
        raise VerificationFailed(f"{len(rep['failures'])} samples violate the inequalities", text)
    return text


def _load_class(path: str):
    data = json.loads(FsPath(path).read_text())
    return class_from_json(data), data.get("surface")


def cmd_intersect(cfg, args):
    a, sa = _load_class(args.class_a)
    b, sb = _load_class(args.class_b)
    g, n = sa or sb or (cfg.genus, cfg.punctures)
    s = Surface(g, n)
    s.require_triangulable()
    reg = flip_ball(base_triangulation(s), cfg.radius)
    a.validate(reg.base)
    b.validate(reg.base)
    eng = IntersectionEngine(reg)
    value, method = eng.compute(a, b)
    out = {"intersection": value, "method": method}
    if isinstance(a, ArcClass) and isinstance(b, ArcClass) and value == 0:
        out["co_occurrence"] = eng.co_occur(a, b)
    return dumps(out)


COMMANDS = {
    "surface-info": cmd_surface_info,
    "flip-ball": cmd_flip_ball,
    "build-ball": cmd_build_ball,
    "classify": cmd_classify,
    "maxsimplices": cmd_maxsimplices,
    "automorphisms": cmd_automorphisms,
    "rewrite-path": cmd_rewrite_path,
    "verify-inequalities": cmd_verify_inequalities,
    "selftest-s03": cmd_selftest_s03,
    "export": cmd_export,
    "intersect": cmd_intersect,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def make_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("-g", "--genus", type=int, default=0)
    common.add_argument("-n", "--punctures", type=int, default=3)
    common.add_argument("-r", "--radius", type=int, default=2)
    common.add_argument("-W", "--weight", type=int, default=6)
    common.add_argument("--samples", type=int, default=50)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("-j", "--jobs", type=int, default=1)
    common.add_argument("--cache-dir", default=None)
    common.add_argument("--no-cache", action="store_true")
    common.add_argument("--format", dest="fmt", default="json")
    common.add_argument("-o", "--output", default=None)
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="arccurve", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name in ("build-ball", "maxsimplices", "automorphisms"):
            sp.add_argument("--kind", choices=KINDS, default="AC")
            if name != "build-ball":
                sp.add_argument("--ball", default=None, help="ball JSON written by build-ball")
        if name in ("classify", "export"):
            sp.add_argument("--ball", required=True)
        if name == "classify":
            sp.add_argument("--vertex", type=int, required=True)
            sp.add_argument("--method", choices=("topo", "comb", "both"), default="both")
        if name == "rewrite-path":
            sp.add_argument("--input", required=True)
        if name == "verify-inequalities":
            sp.add_argument("--bound", type=int, default=8,
                            help="slope height bound for the once-punctured torus")
        if name == "intersect":
            sp.add_argument("--class-a", required=True)
            sp.add_argument("--class-b", required=True)
    return p


def main(argv=None) -> int:
    args = None
    try:
        args = make_parser().parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        cfg = RunConfig(args.genus, args.punctures, args.radius, args.weight, args.samples,
                        args.seed, args.jobs, args.cache_dir, args.fmt)
        emit(COMMANDS[args.command](cfg, args), args.output)
        return 0
    except ArcCurveError as exc:
        report = exc.args[1] if len(exc.args) > 1 else None
        if report is not None:
            emit(report, getattr(args, "output", None))
        err = {"error": type(exc).__name__, "message": str(exc.args[0]) if exc.args else ""}
        sys.stderr.write(json.dumps(err, sort_keys=True) + "\n")
        return exc.code
    except (OSError, ValueError, KeyError) as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)},
                                    sort_keys=True) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
