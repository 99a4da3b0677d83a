"""HTTP + WebSocket surface over a Runtime.

Endpoints (JSON bodies):
  POST /command     {"utterance": str}        -> CommandRecord
  POST /detections  [records]                 -> {"accepted": n, "rejected": [...]}
  POST /lexicon     [entries]                 -> {"entries": n}
  GET  /state                                 -> full world snapshot
  GET  /health                                -> liveness probe
  WS   /stream      pushes {"type": "snapshot"|"record", "data": ...} at the
                    configured cadence; inbound {"utterance": str} messages
                    are executed like POST /command.
"""

import asyncio
import contextlib

from fastapi import FastAPI, Request, WebSocket, WebSocketDisconnect
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .config import ValidationError


async def _json_list(request):
    """Parse the request body as a JSON list, or return an error response."""
    try:
        body = await request.json()
    except Exception:
        return None, JSONResponse(status_code=400, content={"error": "body must be valid JSON"})
    if not isinstance(body, list):
        return None, JSONResponse(status_code=400, content={"error": "body must be a JSON list"})
    return body, None


def create_app(runtime):
    @contextlib.asynccontextmanager
    async def lifespan(app):
        runtime.start_executor()
        yield
        runtime.stop_executor()

    app = FastAPI(title="dualarm gateway", lifespan=lifespan)
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])

    @app.get("/health")
    def health():
        return {"status": "ok", "time": runtime.snapshot()["time"]}

    @app.get("/state")
    def state():
        return runtime.snapshot()

    @app.post("/command")
    def command(body: dict):
        utterance = body.get("utterance") if isinstance(body, dict) else None
        if not utterance or not str(utterance).strip():
            return JSONResponse(status_code=400,
                                content={"error": "body must be {\"utterance\": <text>}"})
        record = runtime.submit_command(str(utterance))
        return record.to_dict()

    @app.post("/detections")
    async def detections(request: Request):
        body, error = await _json_list(request)
        if error is not None:
            return error
        return await asyncio.to_thread(runtime.submit_detections, body)

    @app.post("/lexicon")
    async def lexicon(request: Request):
        body, error = await _json_list(request)
        if error is not None:
            return error
        try:
            count = runtime.reload_lexicon(body)
        except ValidationError as exc:
            return JSONResponse(status_code=400, content={"error": str(exc)})
        return {"entries": count}

    @app.websocket("/stream")
    async def stream(ws: WebSocket):
        await ws.accept()
        interval = 1.0 / runtime.config.service.snapshot_hz
        last_record_id = 0

        async def sender():
            nonlocal last_record_id
            while True:
                for record in runtime.records_since(last_record_id):
                    last_record_id = record["id"]
                    await ws.send_json({"type": "record", "data": record})
                await ws.send_json({"type": "snapshot", "data": runtime.snapshot()})
                await asyncio.sleep(interval)

        async def receiver():
            while True:
                message = await ws.receive_json()
                utterance = message.get("utterance") if isinstance(message, dict) else None
                if utterance:
                    # run on a worker so the snapshot stream keeps flowing
                    await asyncio.to_thread(runtime.submit_command, str(utterance))

        send_task = asyncio.create_task(sender())
        recv_task = asyncio.create_task(receiver())
        try:
            done, pending = await asyncio.wait({send_task, recv_task},
                                               return_when=asyncio.FIRST_COMPLETED)
            for task in pending:
                task.cancel()
            for task in done:
                exc = task.exception()
                if exc is not None and not isinstance(exc, WebSocketDisconnect):
                    raise exc
        except WebSocketDisconnect:
            pass
        finally:
            send_task.cancel()
            recv_task.cancel()

    return app
