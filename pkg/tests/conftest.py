import pytest

from plancomply.records import (
    ActionKind,
    Difficulty,
    StepRecord,
    TrajectoryRecord,
)


@pytest.hookimpl(tryfirst=True, hookwrapper=True)
def pytest_runtest_makereport(item, call):
    # expose per-phase reports so the acceptance suite can print PASS/FAIL
    outcome = yield
    rep = outcome.get_result()
    setattr(item, "rep_" + rep.when, rep)


def make_step(index, kind, path=None, command="", output="", error=False):
    return StepRecord(index=index, action_kind=kind, target_path=path,
                      command_text=command, output_excerpt=output,
                      is_error=error)


def make_trajectory(steps, trajectory_id="t1", **meta):
    return TrajectoryRecord(trajectory_id=trajectory_id, steps=tuple(steps),
                            **meta)


@pytest.fixture
def compliant_trajectory():
    """Nine steps: navigate, reproduce twice, patch, validate three times,
    patch again, validate. Letters N R R P V V V P V."""
    return make_trajectory([
        make_step(1, ActionKind.FILE_VIEW, "src/nanops.py"),
        make_step(2, ActionKind.FILE_CREATE, "reproduce_bug.py",
                  "create reproduce_bug.py"),
        make_step(3, ActionKind.SHELL_EXEC, command="python reproduce_bug.py"),
        make_step(4, ActionKind.FILE_EDIT, "src/nanops.py"),
        make_step(5, ActionKind.FILE_CREATE, "test_corner_cases.py",
                  "create test_corner_cases.py"),
        make_step(6, ActionKind.SHELL_EXEC, command="python test_corner_cases.py"),
        make_step(7, ActionKind.SHELL_EXEC, command="python test_corner_cases.py"),
        make_step(8, ActionKind.FILE_EDIT, "src/nanops.py"),
        make_step(9, ActionKind.SHELL_EXEC, command="python test_corner_cases.py"),
    ], trajectory_id="compliant", instance_id="inst-a",
        model_name="model-x", difficulty=Difficulty.EASY, resolved=True)


@pytest.fixture
def out_of_order_trajectory():
    """Ten steps that reproduce before navigating: letters R R R R N N N P P V,
    so first occurrences of N,R,P,V are [5,1,8,10]."""
    return make_trajectory([
        make_step(1, ActionKind.FILE_CREATE, "reproduce_issue.py",
                  "create reproduce_issue.py"),
        make_step(2, ActionKind.SHELL_EXEC, command="python reproduce_issue.py"),
        make_step(3, ActionKind.FILE_EDIT, "reproduce_issue.py"),
        make_step(4, ActionKind.SHELL_EXEC, command="python reproduce_issue.py"),
        make_step(5, ActionKind.FILE_VIEW, "src/core.py"),
        make_step(6, ActionKind.FILE_SEARCH, "src", "search_dir frobnicate src"),
        make_step(7, ActionKind.FILE_VIEW, "src/core.py"),
        make_step(8, ActionKind.FILE_EDIT, "src/core.py"),
        make_step(9, ActionKind.FILE_EDIT, "src/core.py"),
        make_step(10, ActionKind.SHELL_EXEC, command="python reproduce_issue.py"),
    ], trajectory_id="out-of-order", instance_id="inst-b",
        model_name="model-x", difficulty=Difficulty.MEDIUM, resolved=False)


@pytest.fixture
def skipping_trajectory():
    """Navigation straight to patching, then submit: letters N N N P O."""
    return make_trajectory([
        make_step(1, ActionKind.FILE_VIEW, "lib/parser.py"),
        make_step(2, ActionKind.FILE_VIEW, "lib/lexer.py"),
        make_step(3, ActionKind.FILE_SEARCH, "lib", "grep tokenize lib"),
        make_step(4, ActionKind.FILE_EDIT, "lib/parser.py"),
        make_step(5, ActionKind.SUBMIT, command="submit"),
    ], trajectory_id="skipping", instance_id="inst-c",
        model_name="model-y", difficulty=Difficulty.HARD, resolved=False)
