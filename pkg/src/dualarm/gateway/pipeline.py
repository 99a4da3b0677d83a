"""The command pipeline: utterance -> match -> detection -> grasp -> pick.

``Runtime`` owns the world state and is its only mutator.  In serve mode a
single executor thread drains a FIFO queue of submitted work items, so
commands and detection ingestion are serialized; any number of readers may
take immutable snapshots concurrently.
"""

import itertools
import queue
import threading
import time
from dataclasses import dataclass, field

from .. import simulator
from ..matching import NoMatchError, build_index, match_command
from ..perception import (
    Detection,
    PerceptionError,
    detection_to_grasp_target,
    synthesize_detection,
    validate_detection,
)
from ..simulator import SimulatorError, WorldState

ERROR_NO_MATCH = "NoMatch"
ERROR_NO_DETECTION = "NoDetection"
ERROR_BOTH_UNREACHABLE = "BothUnreachable"
ERROR_NO_IK_SOLUTION = "NoIKSolution"

_SIMULATOR_ERROR_NAMES = {
    simulator.BothUnreachableError: ERROR_BOTH_UNREACHABLE,
    simulator.NoIKSolutionError: ERROR_NO_IK_SOLUTION,
}


@dataclass
class CommandRecord:
    """Append-only pipeline outcome for one utterance: either a pick report
    or a typed error, never both absent."""

    id: int
    utterance: str
    match: dict = None
    detection: dict = None
    grasp_target: list = None
    report: dict = None
    error: dict = None
    submitted_at: float = 0.0
    completed_at: float = 0.0

    def to_dict(self):
        return {
            "id": self.id,
            "utterance": self.utterance,
            "match": self.match,
            "detection": self.detection,
            "grasp_target": self.grasp_target,
            "report": self.report,
            "error": self.error,
            "submitted_at": self.submitted_at,
            "completed_at": self.completed_at,
        }


def _detection_dict(det):
    return {"label": det.label, "u": det.u, "v": det.v, "w": det.width,
            "h": det.height, "depth_m": det.depth, "confidence": det.confidence}


def detection_from_record(raw):
    """Build a Detection from a wire record {label, u, v, w, h, depth_m,
    confidence}; raises ValueError on malformed fields."""
    if not isinstance(raw, dict):
        raise ValueError("detection record must be a mapping")
    try:
        return Detection(
            label=str(raw["label"]),
            u=float(raw["u"]),
            v=float(raw["v"]),
            width=float(raw.get("w", raw.get("width", 0.0))),
            height=float(raw.get("h", raw.get("height", 0.0))),
            depth=float(raw.get("depth_m", raw.get("depth", 0.0))),
            confidence=float(raw.get("confidence", 1.0)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed detection record: {exc}") from exc


@dataclass
class _WorkItem:
    kind: str
    payload: object
    done: threading.Event = field(default_factory=threading.Event)
    result: object = None
    error: BaseException = None


class Runtime:
    """Composition root wiring config, world, matcher and detections."""

    def __init__(self, config, time_scale=None):
        self.config = config
        self.index = build_index(config.lexicon)
        self.world = WorldState.create(config.arms, config.noise)
        self.time_scale = config.service.time_scale if time_scale is None else time_scale
        self.detections = []
        self._det_objects = []      # object id per detection, same order
        self._lock = threading.Lock()
        self._ids = itertools.count(1)
        self._label_counts = {}
        self.history = []
        self._queue = queue.Queue()
        self._executor = None
        self._stopping = False
        if config.scene:
            self.load_scene(config.scene)

    # ------------------------------------------------------------------
    # scene and detections

    def load_scene(self, items):
        """Replace the scene with authoritative object placements and
        synthesize the detections an ideal detector would report.

        Objects outside the camera's view are still placed but yield no
        detection, so commands naming them surface NoDetection.
        """
        with self._lock:
            self._clear_unheld_objects()
            self.detections = []
            self._det_objects = []
            for item in items:
                self.world.spawn_object(item.id, item.label, item.position)
                try:
                    det = synthesize_detection(self.config.intrinsics,
                                               self.config.extrinsics,
                                               item.label, item.position)
                except PerceptionError:
                    continue
                self.detections.append(det)
                self._det_objects.append(item.id)

    def _clear_unheld_objects(self):
        for obj_id in [o.id for o in self.world.objects.values() if o.held_by is None]:
            self.world.remove_object(obj_id)

    def _ingest_detections_locked(self, records):
        accepted, rejected = [], []
        for i, raw in enumerate(records):
            try:
                det = detection_from_record(raw)
            except ValueError as exc:
                rejected.append({"index": i, "reason": str(exc)})
                continue
            reasons = validate_detection(det, self.config.intrinsics)
            if reasons:
                rejected.append({"index": i, "reason": "; ".join(reasons)})
            else:
                accepted.append(det)

        self._clear_unheld_objects()
        self.detections = accepted
        self._det_objects = []
        self._label_counts = {}
        for det in accepted:
            n = self._label_counts.get(det.label, 0) + 1
            self._label_counts[det.label] = n
            obj_id = f"det_{det.label}_{n}"
            target = detection_to_grasp_target(self.config.intrinsics,
                                               self.config.extrinsics, det)
            self.world.spawn_object(obj_id, det.label, target)
            self._det_objects.append(obj_id)
        return {"accepted": len(accepted), "rejected": rejected}

    def ingest_detections(self, records):
        """Replace the current detection set; invalid records are rejected
        individually with reasons. Scene objects are re-derived from the
        accepted detections (held objects persist)."""
        if not isinstance(records, list):
            raise ValueError("detections payload must be a list of records")
        with self._lock:
            return self._ingest_detections_locked(records)

    # ------------------------------------------------------------------
    # command pipeline

    def _find_detection(self, label):
        """Highest-confidence detection of a label whose derived object is
        still pickable; ties break to ingestion order."""
        best = None
        for i, det in enumerate(self.detections):
            if det.label != label:
                continue
            obj = self.world.objects.get(self._det_objects[i])
            if obj is None or obj.held_by is not None:
                continue
            if best is None or det.confidence > self.detections[best].confidence:
                best = i
        return best

    def handle_utterance(self, utterance):
        """Run the full pipeline for one utterance; every call yields exactly
        one CommandRecord whose error field carries NoMatch / NoDetection /
        BothUnreachable / NoIKSolution instead of raising."""
        with self._lock:
            record = CommandRecord(id=next(self._ids), utterance=utterance,
                                   submitted_at=self.world.time)
        try:
            result = match_command(self.index, self.config.lexicon, utterance,
                                   self.config.match_threshold)
            record.match = {
                "template": result.entry.template,
                "action": result.entry.action.value,
                "object_label": result.entry.object_label,
                "score": result.score,
                "accepted": result.accepted,
            }
        except NoMatchError as exc:
            best = exc.best
            record.error = {"type": ERROR_NO_MATCH, "message": str(exc)}
            if best is not None:
                record.match = {
                    "template": best.entry.template,
                    "action": best.entry.action.value,
                    "object_label": best.entry.object_label,
                    "score": best.score,
                    "accepted": False,
                }
            return self._finish_record(record)

        label = result.entry.object_label
        with self._lock:
            det_index = self._find_detection(label)
            if det_index is not None:
                det = self.detections[det_index]
                obj_id = self._det_objects[det_index]
        if det_index is None:
            record.error = {
                "type": ERROR_NO_DETECTION,
                "message": f"no detection for label {label!r}",
                "label": label,
            }
            return self._finish_record(record)
        record.detection = _detection_dict(det)
        target = detection_to_grasp_target(self.config.intrinsics,
                                           self.config.extrinsics, det)
        record.grasp_target = [target.x, target.y, target.z]

        try:
            report = self._run_pick(target, obj_id)
            record.report = {
                "desired": [target.x, target.y, target.z],
                "achieved": [report.achieved.x, report.achieved.y, report.achieved.z],
                "error_cm": report.error_cm,
                "arm": report.arm,
                "elapsed": report.elapsed,
            }
        except SimulatorError as exc:
            record.error = {
                "type": _SIMULATOR_ERROR_NAMES.get(type(exc), type(exc).__name__),
                "message": str(exc),
            }
        return self._finish_record(record)

    def _run_pick(self, target, obj_id):
        """Step a pick to completion, holding the world lock only per step so
        snapshot readers never block for a whole trajectory."""
        sleep_per_step = 0.0
        if self.time_scale and self.time_scale > 0:
            sleep_per_step = self.config.dt / self.time_scale
        with self._lock:
            plan = simulator.start_pick(self.world, target, obj_id,
                                        self.config.motion_limits, self.config.dt)
        arm = self.world.arms[plan.side]
        while True:
            with self._lock:
                if arm.active is None:
                    break
                simulator.step(self.world, self.config.dt)
            if sleep_per_step > 0:
                time.sleep(sleep_per_step)
        with self._lock:
            return simulator.finish_pick(self.world, plan)

    def _finish_record(self, record):
        with self._lock:
            record.completed_at = self.world.time
            self.history.append(record)
        return record

    def reset_for_trial(self):
        """Scenario helper: home the arms and clear scene + detections while
        keeping the noise stream running."""
        with self._lock:
            self.world.reset_arms()
            for obj_id in list(self.world.objects):
                self.world.remove_object(obj_id)
            self.detections = []
            self._det_objects = []
            self._label_counts = {}

    def advance_to(self, sim_time):
        """Step the world forward to a scripted timestamp (no-op if already
        past it; simulated time never rewinds)."""
        with self._lock:
            while self.world.time + self.config.dt <= sim_time:
                simulator.step(self.world, self.config.dt)
            remainder = sim_time - self.world.time
            if remainder > 1e-12:
                simulator.step(self.world, remainder)

    # ------------------------------------------------------------------
    # snapshots

    def snapshot(self):
        with self._lock:
            tail = self.config.service.history_tail
            snap = simulator.snapshot_world(
                self.world, [r.to_dict() for r in self.history[-tail:]])
            snap["detections"] = [_detection_dict(d) for d in self.detections]
            return snap

    def records_since(self, last_id):
        with self._lock:
            return [r.to_dict() for r in self.history if r.id > last_id]

    def reload_lexicon(self, raw_entries):
        """Hot-swap the lexicon and rebuild the index (a new index value; no
        in-place mutation)."""
        from .config import build_lexicon
        lexicon = build_lexicon(raw_entries, source="lexicon")
        index = build_index(lexicon)
        with self._lock:
            self.config.lexicon = lexicon
            self.index = index
        return len(lexicon)

    # ------------------------------------------------------------------
    # executor thread (serve mode)

    def start_executor(self):
        if self._executor is not None:
            return
        self._stopping = False
        self._executor = threading.Thread(target=self._executor_loop,
                                          name="command-executor", daemon=True)
        self._executor.start()

    def stop_executor(self):
        if self._executor is None:
            return
        self._stopping = True
        self._queue.put(None)
        self._executor.join(timeout=5.0)
        self._executor = None

    def _executor_loop(self):
        while True:
            item = self._queue.get()
            if item is None or self._stopping:
                break
            try:
                if item.kind == "command":
                    item.result = self.handle_utterance(item.payload)
                elif item.kind == "detections":
                    item.result = self.ingest_detections(item.payload)
            except BaseException as exc:  # surfaced to the waiting caller
                item.error = exc
            finally:
                item.done.set()

    def _submit(self, kind, payload):
        if self._executor is None:
            raise RuntimeError("executor not running; call start_executor() first")
        item = _WorkItem(kind=kind, payload=payload)
        self._queue.put(item)
        item.done.wait()
        if item.error is not None:
            raise item.error
        return item.result

    def submit_command(self, utterance):
        """Enqueue an utterance on the executor and wait for its record."""
        return self._submit("command", utterance)

    def submit_detections(self, records):
        return self._submit("detections", records)
