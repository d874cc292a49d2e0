"""
gaiakit CLI

Reads JSON (and CSV datasets), runs one construction or check, and prints
a canonical JSON report on stdout. Exit status is 0 on success, 1 when the
checked property fails, 2 when the input cannot be processed and 3 when a
search budget or a capacity limit runs out before an answer is known.
"""

import argparse
import logging
import sys
from collections.abc import Sequence
from contextlib import contextmanager
from functools import reduce

import numpy as np

from gaiakit.coalgebra import greatest_bisimulation, metric_coinduction_iterate
from gaiakit.config import settings
from gaiakit.elements import (
    category_of_elements,
    left_kan_migration,
    pullback_migration,
    right_kan_migration,
)
from gaiakit.errors import (
    ArityError,
    CapacityError,
    FormatError,
    NonContractionError,
    StructuralError,
    ValidationError,
)
from gaiakit.fincat import (
    FinFunctor,
    discrete_category,
    validate_category,
    validate_functor,
    validate_set_diagram,
)
from gaiakit.formats import (
    CategoryModel,
    CoalgebraModel,
    ContractionModel,
    FunctorModel,
    InstanceModel,
    PatternModel,
    PipelineModel,
    SetMapModel,
    SimplicialModel,
    SpaceModel,
    TransformerModel,
    detect_kind,
    dumps,
    load_dataset,
    load_json,
    load_model,
)
from gaiakit.genmetric import check_isometry, validate_space
from gaiakit.homology import boundary_triplets, chain_complex, homology
from gaiakit.learn import (
    check_equivariance,
    compose_blocks,
    compose_seq,
    error_fn,
    functoriality_check,
    gradient_check,
    identity_fn,
    train,
)
from gaiakit.learn.transformer import sample_permutations
from gaiakit.lifting import LiftingQuery, SetSquare, query_by_lifting, window_answers
from gaiakit.schemas import ValidationReport
from gaiakit.search import SearchBudget
from gaiakit.simplicial import (
    HornProblem,
    SimplicialSet,
    enumerate_horn_fillers,
    is_inner_extension_complete,
    is_kan_complex,
    nerve,
    validate_simplicial_set,
)

logger = logging.getLogger(__name__)

EQUIVARIANCE_TOLERANCE = 1e-6


class DomainFailure(Exception):
    """The command ran but the property it checks does not hold."""


@contextmanager
def temporary_settings(**overrides):
    """
    Temporarily override settings without polluting global state.

    ``None`` values leave the setting alone. Every overridden value is
    restored on exit, also when the command fails.

    Example:
        with temporary_settings(budget=1000):
            run_search()
        # settings.budget is restored
    """
    overrides = {name: value for name, value in overrides.items() if value is not None}
    original = {name: getattr(settings, name) for name in overrides}
    try:
        for name, value in overrides.items():
            setattr(settings, name, value)
        yield
    finally:
        for name, value in original.items():
            setattr(settings, name, value)


def emit(report) -> None:
    print(dumps(report))


def report_json(report: ValidationReport) -> dict:
    if report.valid:
        return {"valid": True}
    return {
        "valid": False,
        "structural": report.structural,
        "violations": [{"kind": v.kind, "detail": v.detail} for v in report.violations],
    }


def require_seed(command: str) -> int:
    if settings.seed is None:
        raise ValidationError(f"'{command}' is stochastic and needs --seed")
    return settings.seed


def load_simplicial(path: str, kind: str | None = None) -> SimplicialSet:
    """A simplicial set file, or the nerve of a category file."""
    raw = load_json(path)
    kind = kind or detect_kind(raw)
    if kind == "category":
        return nerve(load_model(path, CategoryModel, raw).to_domain())
    if kind != "simplicial":
        raise FormatError(f"{path}: expected a simplicial set or a category, found {kind}")
    return load_model(path, SimplicialModel, raw).to_domain(settings.truncation)


# --- Commands ---


def cmd_validate(path: str, kind: str | None = None):
    raw = load_json(path)
    kind = kind or detect_kind(raw)
    match kind:
        case "category":
            report = validate_category(load_model(path, CategoryModel, raw).to_domain())
        case "functor":
            report = validate_functor(load_model(path, FunctorModel, raw).to_domain())
        case "instance":
            report = validate_set_diagram(load_model(path, InstanceModel, raw).to_domain())
        case "simplicial":
            model = load_model(path, SimplicialModel, raw)
            report = validate_simplicial_set(model.to_domain(settings.truncation))
        case "space":
            report = validate_space(load_model(path, SpaceModel, raw).to_domain(validate=False))
        case "coalgebra":
            load_model(path, CoalgebraModel, raw).to_domain()
            report = ValidationReport()
        case _:
            raise FormatError(f"unknown input kind '{kind}'")
    emit(report_json(report))
    if not report.valid:
        raise DomainFailure


def cmd_nerve(path: str):
    c = load_model(path, CategoryModel).to_domain()
    x = nerve(c)
    emit(
        {
            "truncation": x.truncation,
            "sizes": [len(level) for level in x.levels],
            "nondegenerate": [len(x.nondegenerate(n)) for n in range(x.truncation + 1)],
            "simplices": x.levels,
        }
    )


def parse_faces(faces: Sequence[str]) -> dict[int, str]:
    parsed = {}
    for item in faces:
        index, sep, simplex = item.partition("=")
        if not sep or not index.strip().isdigit():
            raise FormatError(f"face '{item}' is not of the form i=simplex")
        parsed[int(index)] = simplex
    return parsed


def cmd_fill_horn(path: str, n: int, k: int, faces: Sequence[str]):
    x = load_simplicial(path)
    problem = HornProblem(n, k, x, parse_faces(faces))
    fillers = enumerate_horn_fillers(problem, SearchBudget("fill-horn"))
    emit({"fillers": len(fillers), "simplices": fillers})


def cmd_kan_check(path: str, max_dim: int | None, inner: bool):
    x = load_simplicial(path)
    if inner:
        emit({"holds": is_inner_extension_complete(x, max_dim, require_unique=True)})
        return
    report = is_kan_complex(x, max_dim)
    witness = None
    if report.witness is not None:
        witness = {
            "n": report.witness.n,
            "k": report.witness.k,
            "faces": {str(i): y for i, y in report.witness.faces.items()},
        }
    emit({"holds": report.holds, "witness": witness})


def cmd_lift(f: str, p: str, top: str, bottom: str, expect_solution: bool):
    square = SetSquare(
        *(load_model(path, SetMapModel).to_domain() for path in (f, p, top, bottom))
    )
    solutions = square.solve(SearchBudget("lift"))
    emit({"count": len(solutions), "solutions": [dict(h.table) for h in solutions]})
    if expect_solution and not solutions:
        raise DomainFailure


def cmd_query(instance_path: str, pattern_path: str):
    instance = load_model(instance_path, InstanceModel).to_domain()
    spec = load_model(pattern_path, PatternModel)
    pattern = spec.to_domain(instance.schema)
    window = None
    if spec.window is not None:
        r = category_of_elements(pattern).category
        q = discrete_category(spec.window)
        window = FinFunctor(
            q, r, {o: o for o in q.objects}, {q.id(o): r.id(o) for o in q.objects}
        )
    query = LiftingQuery.from_pattern(
        pattern,
        instance,
        window=window,
        anchor=spec.anchor or None,
        injective=spec.injective,
        dedup=spec.dedup,
    )
    bindings = query_by_lifting(query, SearchBudget("query"))
    report = {"count": len(bindings), "bindings": bindings}
    if window is not None:
        report["answers"] = window_answers(query, bindings)
    emit(report)


def cmd_migrate(functor_path: str, instance_path: str, mode: str):
    functor = load_model(functor_path, FunctorModel).to_domain()
    model = load_model(instance_path, InstanceModel)
    match mode:
        case "delta":
            result = pullback_migration(functor, model.to_domain(functor.target))
        case "sigma":
            result = left_kan_migration(functor, model.to_domain(functor.source))
        case "pi":
            result = right_kan_migration(functor, model.to_domain(functor.source))
    emit(InstanceModel.from_domain(result))


def cmd_train(pipeline_path: str, dataset_path: str, epochs: int, epsilon: float | None):
    spec = load_model(pipeline_path, PipelineModel)
    seed = settings.seed
    if spec.optimizer == "zeroth_order" or spec.init == "normal":
        seed = require_seed("train")
    learner = reduce(compose_seq, spec.learners(seed, epsilon))
    dataset = load_dataset(dataset_path, learner.n_in, learner.n_out)
    result = train(learner, dataset, epochs, error_fn(spec.error))
    emit(
        {
            "params": result.params,
            "losses": result.losses,
            "final_loss": result.losses[-1] if result.losses else None,
        }
    )


def cmd_check_functoriality(pipeline_path: str, samples: int):
    spec = load_model(pipeline_path, PipelineModel)
    functions = spec.functions()
    if len(functions) == 1:
        functions.append(identity_fn(functions[0].n_out))
    rng = np.random.default_rng(settings.seed or 0)
    error = error_fn(spec.error)
    pairs = []
    for i, (f, g) in enumerate(zip(functions, functions[1:])):
        report = functoriality_check(f, g, settings.epsilon, error, samples, rng)
        pairs.append(
            {"layers": [i, i + 1], "holds": report.holds, "max_deviation": report.max_deviation}
        )
    gradient_error = max(gradient_check(f, rng, samples) for f in functions)
    holds = all(pair["holds"] for pair in pairs)
    emit(
        {
            "holds": holds,
            "max_deviation": max(pair["max_deviation"] for pair in pairs),
            "pairs": pairs,
            "gradient_error": gradient_error,
        }
    )
    if not holds:
        raise DomainFailure


def cmd_equivariance(path: str):
    spec = load_model(path, TransformerModel)
    rng = np.random.default_rng(require_seed("equivariance"))
    stacked = compose_blocks(*spec.to_domain(rng))
    x = rng.standard_normal((spec.d, spec.n))
    permutations = list(sample_permutations(spec.n, rng, spec.samples))
    deviation = check_equivariance(stacked, x, permutations)
    holds = deviation <= EQUIVARIANCE_TOLERANCE
    emit({"holds": holds, "max_deviation": deviation, "permutations": len(permutations)})
    if not holds:
        raise DomainFailure


def cmd_bisim(left_path: str, right_path: str):
    left = load_model(left_path, CoalgebraModel).to_domain()
    right = load_model(right_path, CoalgebraModel).to_domain()
    relation = greatest_bisimulation(left, right)
    emit({"pairs": sorted(relation.pairs)})


def cmd_coinductive_solve(path: str):
    spec = load_model(path, ContractionModel)
    h, start = spec.to_domain()
    point, certificate = metric_coinduction_iterate(h, start, spec.modulus, settings.tolerance)
    c = certificate.modulus
    bound = certificate.final_step * c / (1 - c) if c < 1 else None
    emit(
        {
            "fixed_point": point,
            "iterations": certificate.iterations,
            "modulus": c,
            "estimated": certificate.estimated,
            "error_bound": bound,
        }
    )


def cmd_yoneda_check(path: str):
    space = load_model(path, SpaceModel).to_domain()
    report = check_isometry(space)
    emit(
        {
            "holds": report.holds,
            "max_deviation": report.max_deviation,
            "deviations": report.deviations,
        }
    )
    if not report.holds:
        raise DomainFailure


def cmd_homology(path: str, kind: str | None, export: str | None):
    raw = load_json(path)
    kind = kind or detect_kind(raw)
    if kind == "instance":
        instance = load_model(path, InstanceModel, raw).to_domain()
        x = nerve(category_of_elements(instance).category)
    else:
        x = load_simplicial(path, kind)
    complex_ = chain_complex(x)
    result = homology(complex_)
    if export:
        with open(export, "w", encoding="utf-8") as f:
            for n, row, col, value in boundary_triplets(complex_):
                f.write(f"{n} {row} {col} {value}\n")
    emit(
        {
            "betti": result.betti,
            "torsion": result.torsion,
            "euler_characteristic": result.euler_characteristic,
            "top_dimension_truncated": result.top_dimension_truncated,
        }
    )


# --- Parser ---


def create_parser():
    """Create and configure the argument parser."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--truncation", type=int, help=f"Nerve truncation bound (default: {settings.truncation})"
    )
    common.add_argument(
        "--epsilon", type=float, help=f"Learning rate (default: {settings.epsilon})"
    )
    common.add_argument(
        "--tolerance", type=float, help=f"Numeric tolerance (default: {settings.tolerance})"
    )
    common.add_argument("--seed", type=int, help="Random seed; required by stochastic commands")
    common.add_argument(
        "--budget",
        type=int,
        help=f"Search node budget (default: {settings.budget}, env GAIA_KIT_BUDGET)",
    )

    parser = argparse.ArgumentParser(
        prog="gaiakit",
        description="Finite category theory, simplicial sets, learners and coalgebras",
    )
    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    def add(name: str, help: str) -> argparse.ArgumentParser:
        return subparsers.add_parser(name, help=help, parents=[common])

    kinds = ["category", "functor", "instance", "simplicial", "space", "coalgebra"]

    # validate command
    parser_validate = add("validate", "Check the laws of a finite presentation")
    parser_validate.add_argument("path", help="Input JSON file")
    parser_validate.add_argument("--kind", choices=kinds, help="Override input detection")

    # nerve command
    parser_nerve = add("nerve", "Truncated nerve of a category")
    parser_nerve.add_argument("path", help="Category JSON file")

    # fill-horn command
    parser_fill = add("fill-horn", "Enumerate the fillers of a horn")
    parser_fill.add_argument("path", help="Simplicial set or category JSON file")
    parser_fill.add_argument("--n", type=int, required=True, help="Horn dimension")
    parser_fill.add_argument("--k", type=int, required=True, help="Missing face")
    parser_fill.add_argument(
        "--face",
        action="append",
        default=[],
        metavar="I=SIMPLEX",
        help="Face i of the horn (repeat for every i != k)",
    )

    # kan-check command
    parser_kan = add("kan-check", "Check horn filling up to a dimension")
    parser_kan.add_argument("path", help="Simplicial set or category JSON file")
    parser_kan.add_argument("--max-dim", type=int, help="Highest horn dimension checked")
    parser_kan.add_argument(
        "--inner", action="store_true", help="Inner horns only, with unique fillers"
    )

    # lift command
    parser_lift = add("lift", "Solve a lifting square of finite sets")
    for name in ("f", "p", "top", "bottom"):
        parser_lift.add_argument(name, help=f"Map file for {name}")
    parser_lift.add_argument(
        "--expect-solution", action="store_true", help="Exit 1 when there is no diagonal"
    )

    # query command
    parser_query = add("query", "Answer a pattern query by lifting")
    parser_query.add_argument("instance", help="Instance JSON file")
    parser_query.add_argument("pattern", help="Pattern JSON file")

    # migrate command
    parser_migrate = add("migrate", "Migrate an instance along a functor")
    parser_migrate.add_argument("functor", help="Functor JSON file")
    parser_migrate.add_argument("instance", help="Instance JSON file")
    parser_migrate.add_argument("--mode", choices=["delta", "sigma", "pi"], required=True)

    # train command
    parser_train = add("train", "Train a learner pipeline on a CSV dataset")
    parser_train.add_argument("pipeline", help="Pipeline JSON file")
    parser_train.add_argument("dataset", help="CSV of input and target columns")
    parser_train.add_argument("--epochs", type=int, default=100, help="Epochs (default: 100)")

    # check-functoriality command
    parser_functor = add("check-functoriality", "Compare L(g∘f) with L(f);L(g)")
    parser_functor.add_argument("pipeline", help="Pipeline JSON file")
    parser_functor.add_argument("--samples", type=int, default=100, help="Samples per pair")

    # equivariance command
    parser_equivariance = add("equivariance", "Check permutation equivariance of blocks")
    parser_equivariance.add_argument("path", help="Transformer JSON file")

    # bisim command
    parser_bisim = add("bisim", "Greatest bisimulation between two coalgebras")
    parser_bisim.add_argument("left", help="Coalgebra JSON file")
    parser_bisim.add_argument("right", help="Coalgebra JSON file")

    # coinductive-solve command
    parser_solve = add("coinductive-solve", "Iterate an affine contraction to its fixed point")
    parser_solve.add_argument("path", help="Contraction JSON file")

    # yoneda-check command
    parser_yoneda = add("yoneda-check", "Check the metric Yoneda embedding is an isometry")
    parser_yoneda.add_argument("path", help="Space JSON file")

    # homology command
    parser_homology = add("homology", "Integer homology of a simplicial set")
    parser_homology.add_argument("--input", dest="path", required=True, help="Input JSON file")
    parser_homology.add_argument(
        "--kind", choices=["simplicial", "category", "instance"], help="Override input detection"
    )
    parser_homology.add_argument(
        "--export-boundaries", metavar="PATH", help="Write boundary matrices as triplets"
    )

    return parser


def dispatch(args: argparse.Namespace) -> None:
    match args.command:
        case "validate":
            cmd_validate(args.path, args.kind)
        case "nerve":
            cmd_nerve(args.path)
        case "fill-horn":
            cmd_fill_horn(args.path, args.n, args.k, args.face)
        case "kan-check":
            cmd_kan_check(args.path, args.max_dim, args.inner)
        case "lift":
            cmd_lift(args.f, args.p, args.top, args.bottom, args.expect_solution)
        case "query":
            cmd_query(args.instance, args.pattern)
        case "migrate":
            cmd_migrate(args.functor, args.instance, args.mode)
        case "train":
            cmd_train(args.pipeline, args.dataset, args.epochs, args.epsilon)
        case "check-functoriality":
            cmd_check_functoriality(args.pipeline, args.samples)
        case "equivariance":
            cmd_equivariance(args.path)
        case "bisim":
            cmd_bisim(args.left, args.right)
        case "coinductive-solve":
            cmd_coinductive_solve(args.path)
        case "yoneda-check":
            cmd_yoneda_check(args.path)
        case "homology":
            cmd_homology(args.path, args.kind, args.export_boundaries)


def run(argv: Sequence[str] | None = None) -> int:
    """Run one command and return its exit status."""
    parser = create_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 2
    if args.command is None:
        parser.print_help(sys.stderr)
        return 2

    logging.basicConfig(level=settings.log_level, stream=sys.stderr)
    overrides = {
        "truncation": args.truncation,
        "epsilon": args.epsilon,
        "tolerance": args.tolerance,
        "seed": args.seed,
        "budget": args.budget,
    }
    with temporary_settings(**overrides):
        try:
            dispatch(args)
        except DomainFailure:
            return 1
        except NonContractionError as e:
            print(f"error: {e}", file=sys.stderr)
            return 1
        except CapacityError as e:
            print(f"error: {e}", file=sys.stderr)
            return 3
        except (FormatError, StructuralError, ValidationError, ArityError, OSError) as e:
            print(f"error: {e}", file=sys.stderr)
            return 2
    return 0


def main():
    """Main entry point."""
    raise SystemExit(run())


if __name__ == "__main__":
    main()
