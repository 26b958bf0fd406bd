"""
Command-line front end.

    hamnet <validate|search|unfold|nets|verify|demo> [NAME] [--fixture NAME | --off PATH | --random N]
           [--cycle V-V-...] [--edge I,J] [--limit N] [--seed N] [--all-cycles] [--allow-nonconvex]
           [--dedupe] [--zipper] [--net PATH] [--out PATH] [--format json|svg] [-v]

Vertex numbers are 1-based everywhere. Exit status: 0 success, 1 a check failed,
2 usage or input error.
"""

import argparse
import json
import logging
import os
import sys
from typing import Optional

from .config_default import Config
from .corpus import FIXTURE_REGISTRY, CorpusError, UnknownFixtureError, corpus_gen
from .hamnet import HamNet
from .hamq_search import (CycleError, find_ham_cycles, find_ham_quasigeodesics, format_cycle, parse_cycle,
                          require_quasigeodesic)
from .io import (NetFormatError, emit_svg, net_to_dict, net_to_json, read_net_file, report_to_json,
                 validation_to_dict)
from .mesh_core import MeshError
from .unfold import UnfoldError, enumerate_nets, join, partition, unfold_half
from .utils import run_demo, zipper_nets, zipper_survey
from .verify import verify_net

logger = logging.getLogger("HamNet.CLI")

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2

# Input problems: reported and mapped to EXIT_USAGE
INPUT_ERRORS = (UnknownFixtureError, CycleError, MeshError, NetFormatError, CorpusError, OSError)


class UsageError(ValueError):
    """Arguments parse but do not make sense together."""


def _plural(n: int, word: str) -> str:
    return f"{n} {word}" if n == 1 else f"{n} {word}s"


def _parse_edge(text: str) -> tuple:
    parts = text.replace('-', ',').split(',')
    try:
        i, j = (int(p) for p in parts)
    except ValueError:
        raise UsageError(f"--edge expects I,J, got {text!r}") from None
    return i - 1, j - 1


def _parse_args(argv=None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog='hamnet',
        description="Find Hamiltonian quasigeodesics on convex polyhedra and unfold along them.",
    )
    parser.add_argument('command', choices=sorted(COMMAND_REGISTRY))
    parser.add_argument('name', nargs='?', help="fixture name (same as --fixture)")
    source = parser.add_mutually_exclusive_group()
    source.add_argument('--fixture', choices=sorted(FIXTURE_REGISTRY))
    source.add_argument('--off', metavar='PATH', help="OFF mesh file")
    source.add_argument('--random', type=int, metavar='N', help="convex hull of N random points on the sphere")
    parser.add_argument('--cycle', help="Hamiltonian cycle, e.g. 1-5-6-2-3-7-8-4 or 15623784")
    parser.add_argument('--edge', help="join edge I,J (must be a cycle edge)")
    parser.add_argument('--limit', type=int, help="stop after N cycles")
    parser.add_argument('--seed', type=int, help="seed for --random (default Config.CORPUS_SEED)")
    parser.add_argument('--all-cycles', action='store_true', help="search plain Hamiltonian circuits")
    parser.add_argument('--allow-nonconvex', action='store_true', help="skip the convexity validation")
    parser.add_argument('--dedupe', action='store_true', help="drop nets congruent to an earlier one")
    parser.add_argument('--zipper', action='store_true',
                        help="nets: accept any Hamiltonian cycle and report overlaps instead of refusing")
    parser.add_argument('--net', metavar='PATH', help="net JSON to verify")
    parser.add_argument('--out', metavar='PATH', help="output file (default stdout)")
    parser.add_argument('--format', choices=('json', 'svg'), default='json')
    parser.add_argument('-v', '--verbose', action='store_true', help="debug logging")
    return parser.parse_args(argv)


def _load_input(session: HamNet, args):
    if args.name and args.fixture and args.name != args.fixture:
        raise UsageError(f"two fixtures given: {args.name!r} and {args.fixture!r}")
    name = args.fixture or args.name
    if args.random is not None:
        if name or args.off:
            raise UsageError("give exactly one input: a fixture, --off or --random")
        return corpus_gen(args.random, args.seed, session.cfg)
    if name is None and args.off is None:
        raise UsageError("no input: give a fixture name, --off PATH or --random N")
    if name is not None and args.off is not None:
        raise UsageError("give exactly one input: a fixture, --off or --random")
    if name is not None and name not in FIXTURE_REGISTRY:
        raise UnknownFixtureError(f"unknown fixture {name!r}; available: {sorted(FIXTURE_REGISTRY)}")
    return session.load(fixture_name=name, off_path=args.off)


def _emit(session: HamNet, args, text: str) -> None:
    if args.out:
        session.write_output(args.out, text)
    else:
        sys.stdout.write(text)


def _cycle_and_edge(P, args, quasigeodesic: bool, config):
    if not args.cycle:
        raise UsageError(f"{args.command} needs --cycle")
    Q = parse_cycle(P, args.cycle)
    if quasigeodesic:
        require_quasigeodesic(P, Q, config)
    if args.edge is None:
        return Q, Q.directed_edges()[0]
    e = _parse_edge(args.edge)
    if tuple(sorted(e)) not in Q.edge_set():
        raise CycleError(f"edge {e[0] + 1}-{e[1] + 1} is not on cycle {format_cycle(Q)}")
    return Q, e


def _cmd_validate(session: HamNet, P, args) -> dict:
    report = session.check_input(P, args.allow_nonconvex)
    if args.out or args.format == 'json':
        _emit(session, args, json.dumps(validation_to_dict(P, report), indent=2) + '\n')
    return {'ok': report.passed, 'error': None if report.passed else
            f"{P.label} fails {', '.join(c.name for c in report.failures())}"}


def _cmd_search(session: HamNet, P, args) -> dict:
    if args.all_cycles:
        cycles = find_ham_cycles(P, limit=args.limit, config=session.cfg)
        word = 'Hamiltonian circuit'
    else:
        cycles = find_ham_quasigeodesics(P, limit=args.limit, config=session.cfg)
        word = 'Hamiltonian quasigeodesic'
    lines = [_plural(len(cycles), word)] + [format_cycle(Q, canonical=True) for Q in cycles]
    _emit(session, args, '\n'.join(lines) + '\n')
    return {'ok': True, 'count': len(cycles)}


def _cmd_unfold(session: HamNet, P, args) -> dict:
    cfg = session.cfg
    Q, e = _cycle_and_edge(P, args, quasigeodesic=True, config=cfg)
    A, B = partition(P, Q)
    net = join(P, Q, unfold_half(P, A, config=cfg), unfold_half(P, B, config=cfg), e, config=cfg)
    report = verify_net(P, net, cfg)
    _emit(session, args, emit_svg(net, cfg) if args.format == 'svg' else net_to_json(net))
    return {'ok': report.passed, 'error': None if report.passed else "net failed verification"}


def _svg_path(out: str, net) -> str:
    stem, ext = os.path.splitext(out)
    return f"{stem}_{net.join_edge[0] + 1}-{net.join_edge[1] + 1}{ext or '.svg'}"


def _cmd_nets(session: HamNet, P, args) -> dict:
    cfg = session.cfg
    if args.zipper and not args.cycle:
        survey = zipper_survey(P, config=cfg, limit=args.limit)
        lines = [f"{survey['nets']} of {survey['unfoldings']} zipper unfoldings over "
                 f"{_plural(survey['cycles'], 'Hamiltonian circuit')} are nets"]
        lines += [f"{c['cycle']}: {c['nets']}/{c['unfoldings']}" + (" (quasigeodesic)" if c['quasigeodesic'] else "")
                  for c in survey['per_cycle']]
        _emit(session, args, '\n'.join(lines) + '\n')
        return {'ok': True}

    Q, _ = _cycle_and_edge(P, args, quasigeodesic=not args.zipper, config=cfg)
    if args.zipper:
        pairs = zipper_nets(P, Q, cfg)
        nets = [net for net, _ in pairs]
        lines = [f"{sum(ok for _, ok in pairs)} of {len(pairs)} zipper unfoldings of {format_cycle(Q)} are nets"]
        lines += [f"join {n.join_edge[0] + 1}-{n.join_edge[1] + 1}: {'net' if ok else 'overlaps'}" for n, ok in pairs]
        ok = True
    else:
        nets = enumerate_nets(P, Q, dedupe=args.dedupe, config=cfg)
        reports = [verify_net(P, net, cfg) for net in nets]
        ok = all(r.passed for r in reports)
        lines = [_plural(len(nets), 'net') + f" for {format_cycle(Q)}"]
        lines += [f"join {n.join_edge[0] + 1}-{n.join_edge[1] + 1}: {'verified' if r.passed else 'FAILED'}"
                  for n, r in zip(nets, reports)]

    if args.out and args.format == 'svg':
        for net in nets:
            session.write_output(_svg_path(args.out, net), emit_svg(net, cfg))
        sys.stdout.write('\n'.join(lines) + '\n')
    elif args.out:
        session.write_output(args.out, json.dumps([net_to_dict(n) for n in nets], indent=2) + '\n')
        sys.stdout.write('\n'.join(lines) + '\n')
    else:
        sys.stdout.write('\n'.join(lines) + '\n')
    return {'ok': ok, 'error': None if ok else "a net failed verification"}


def _cmd_verify(session: HamNet, P, args) -> dict:
    if not args.net:
        raise UsageError("verify needs --net PATH")
    net = read_net_file(P, args.net, session.cfg)
    report = verify_net(P, net, session.cfg)
    _emit(session, args, report_to_json(report))
    return {'ok': report.passed, 'error': None if report.passed else "net failed verification"}


def _cmd_demo(session: HamNet, P, args) -> dict:
    result = run_demo(session.cfg)
    lines = []
    for r in result['examples']:
        lines.append(f"{r['polyhedron']} Q={r['cycle']}: {_plural(r['nets'], 'net')}, {r['claim']}: "
                     f"{'ok' if r['ok'] else 'FAILED'}")
    _emit(session, args, '\n'.join(lines) + '\n')
    return {'ok': result['ok'], 'error': None if result['ok'] else "a worked example failed"}


# Command registry - maps subcommand names to handlers(session, polyhedron, args) -> {'ok', 'error', ...}
COMMAND_REGISTRY = {
    'validate': _cmd_validate,
    'search': _cmd_search,
    'unfold': _cmd_unfold,
    'nets': _cmd_nets,
    'verify': _cmd_verify,
    'demo': _cmd_demo,
}


def main(argv=None, config: Optional[Config] = None) -> int:
    try:
        args = _parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    cfg = config if config is not None else Config()
    if args.verbose:
        cfg.LOG_LEVEL = 'DEBUG'

    with HamNet(cfg) as session:
        try:
            P = None
            if args.command != 'demo':
                P = _load_input(session, args)
                if args.command != 'validate':
                    report = session.check_input(P, args.allow_nonconvex)
                    if not report.passed:
                        failed = ', '.join(f"{c.name} ({c.details})" for c in report.failures())
                        logger.error(f"{P.label} is not a valid input: {failed}")
                        return EXIT_CHECK_FAILED
            result = COMMAND_REGISTRY[args.command](session, P, args)
        except (UsageError, *INPUT_ERRORS) as e:
            logger.error(str(e))
            return EXIT_USAGE
        except UnfoldError as e:
            logger.error(f"unfolding failed: {e}")
            return EXIT_CHECK_FAILED

        if not result.get('ok'):
            logger.error(result.get('error') or f"{args.command} failed")
            return EXIT_CHECK_FAILED
        return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
