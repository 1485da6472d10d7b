from dualbilliards.core.state import BatchState


def test_fresh_state_is_idle():
    snapshot = BatchState().get_snapshot()
    assert snapshot["running"] is False
    assert snapshot["selector"] is None
    assert snapshot["progress"] == {"done": 0, "total": 0, "percent": 0}


def test_progress_and_failures():
    state = BatchState()
    state.start_batch("cube", 7)
    state.set_total(4)
    state.record_pass("cube#0")
    state.record_failure("cube#1", "identity does not hold")
    snapshot = state.get_snapshot()
    assert snapshot["running"] is True
    assert (snapshot["selector"], snapshot["seed"]) == ("cube", 7)
    assert snapshot["progress"] == {"done": 2, "total": 4, "percent": 50}
    assert snapshot["passed"] == 1
    assert snapshot["last_case"] == "cube#1"
    assert snapshot["success"] is False
    assert snapshot["failures"] == [{"case": "cube#1", "reason": "identity does not hold"}]


def test_failures_are_reported_by_case_name():
    state = BatchState()
    state.start_batch("hf", 0)
    state.record_failure("hf#3", "boom")
    state.record_failure("hf#1", "boom")
    assert [f["case"] for f in state.get_snapshot()["failures"]] == ["hf#1", "hf#3"]


def test_start_batch_clears_previous_failures():
    state = BatchState()
    state.record_failure("hf#3", "boom")
    state.start_batch("hf", 1)
    assert state.get_snapshot()["success"] is True
    state.finish_batch()
    snapshot = state.get_snapshot()
    assert snapshot["running"] is False
    assert snapshot["seed"] == 1
