/**
 * Wire protocol schemas for the runtime gateway.
 *
 * Text frames {"type", "seq", "payload"} over a WebSocket; seq strictly
 * increasing per connection in each direction. Frames that fail these
 * schemas are never rendered; unknown types are ignored by design.
 */

import { z } from "zod";

export const JointSchema = z.object({
  name: z.string(),
  channel: z.number().int().optional(),
  commanded_angle: z.number(),
  actual_angle: z.number(),
  pulse: z.number(),
});

export const ServoStateSchema = z.object({
  time: z.number(),
  joints: z.array(JointSchema).min(1),
  active_task: z.string().nullable(),
});

export const SegmentSchema = z.object({
  name: z.string(),
  status: z.string(),
  reason: z.string().nullable().optional(),
  restart_count: z.number().int(),
});

export const SupervisorSchema = z.object({
  segments: z.array(SegmentSchema),
  active_task: z.string().nullable(),
});

export const ChatTurnSchema = z.object({
  speaker: z.enum(["user", "robot", "system"]),
  text: z.string(),
  tag: z.string().nullable().optional(),
});

export const ErrorReportSchema = z.object({
  segment: z.string(),
  reason: z.string(),
  time: z.number(),
});

export const MetricsSchema = z.object({
  counts: z.record(z.string(), z.number().int().nonnegative()),
});

export const DisplaySchema = z.object({
  bitmap: z.array(z.union([z.literal(0), z.literal(1)])).length(64),
});

export const TaskSchema = z.object({
  event: z.enum(["started", "finished"]),
  task: z.string(),
  status: z.string().optional(),
  reason: z.string().nullable().optional(),
});

export const SnapshotSchema = z.object({
  time: z.number(),
  joints: z.array(JointSchema),
  active_task: z.string().nullable(),
  mode: z.string(),
  display: z.array(z.number()).length(64),
  supervisor: z.array(SegmentSchema),
  metrics: z.record(z.string(), z.number()),
});

export const HelloSchema = z.object({
  server: z.string(),
  version: z.string(),
  snapshot: SnapshotSchema,
  joints: z.array(z.string()),
});

export const AckSchema = z.object({ for_seq: z.number().int() });

export const ErrorFrameSchema = z.object({
  for_seq: z.number().int().nullable(),
  message: z.string(),
});

const base = { seq: z.number().int() };

export const ServerEnvelopeSchema = z.discriminatedUnion("type", [
  z.object({ ...base, type: z.literal("hello"), payload: HelloSchema }),
  z.object({ ...base, type: z.literal("servo_state"), payload: ServoStateSchema }),
  z.object({ ...base, type: z.literal("chat_turn"), payload: ChatTurnSchema }),
  z.object({ ...base, type: z.literal("supervisor"), payload: SupervisorSchema }),
  z.object({ ...base, type: z.literal("error_report"), payload: ErrorReportSchema }),
  z.object({ ...base, type: z.literal("metrics"), payload: MetricsSchema }),
  z.object({ ...base, type: z.literal("display"), payload: DisplaySchema }),
  z.object({ ...base, type: z.literal("task"), payload: TaskSchema }),
  z.object({ ...base, type: z.literal("ack"), payload: AckSchema }),
  z.object({ ...base, type: z.literal("error"), payload: ErrorFrameSchema }),
]);

export type ServerEnvelope = z.infer<typeof ServerEnvelopeSchema>;
export type HelloPayload = z.infer<typeof HelloSchema>;
export type ServoStatePayload = z.infer<typeof ServoStateSchema>;
export type SupervisorPayload = z.infer<typeof SupervisorSchema>;
export type ChatTurnPayload = z.infer<typeof ChatTurnSchema>;
export type ErrorReportPayload = z.infer<typeof ErrorReportSchema>;
export type TaskPayload = z.infer<typeof TaskSchema>;
export type JointState = z.infer<typeof JointSchema>;

export type ParseResult =
  | { ok: true; envelope: ServerEnvelope }
  | { ok: false; reason: string };

/** Parse one raw text frame; never throws. Unknown types report as such. */
export function parseServerFrame(raw: string): ParseResult {
  let doc: unknown;
  try {
    doc = JSON.parse(raw);
  } catch {
    return { ok: false, reason: "not valid JSON" };
  }
  const result = ServerEnvelopeSchema.safeParse(doc);
  if (!result.success) {
    const type =
      typeof doc === "object" && doc !== null && "type" in doc
        ? String((doc as { type: unknown }).type)
        : "?";
    return { ok: false, reason: `schema-invalid ${type} frame` };
  }
  return { ok: true, envelope: result.data };
}

export type ClientFrameType = "command" | "chat" | "ack_request";

export function makeClientEnvelope(
  type: ClientFrameType,
  seq: number,
  text?: string,
): string {
  const payload = text === undefined ? {} : { text };
  return JSON.stringify({ type, seq, payload });
}
