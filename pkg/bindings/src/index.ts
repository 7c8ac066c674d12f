/**
 * Node bindings for the adcfkit detection-metrics toolkit.
 *
 * The binding never computes a metric: every call marshals the input
 * arrays into adcfkit's text file formats, invokes the adcfkit CLI, and
 * parses its machine JSON, so results are bit-identical to the CLI by
 * construction. All functions are async; the Node event loop is never
 * blocked while the metric kernel runs.
 *
 * On POSIX platforms inputs are streamed to the CLI through named pipes
 * so serialization overlaps the CLI's own parsing; one serialization
 * pass per array, no intermediate copies of the score buffers. Set
 * ADCFKIT_NO_FIFO=1 to force plain temp files.
 *
 * Label encoding at the boundary: 0 = target, 1 = nontarget, 2 = spoof.
 */

import { spawn, spawnSync } from "node:child_process";
import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";

export type NumericArray = Float64Array | readonly number[];
export type IntArray =
  | Int8Array
  | Int16Array
  | Int32Array
  | Uint8Array
  | Uint16Array
  | Uint32Array
  | readonly number[];

/** Cost parameters; a built-in preset name ("adcf1", "adcf2") also works. */
export interface CostParams {
  pi_tar: number;
  pi_non: number;
  pi_spf: number;
  c_miss: number;
  c_fa_non: number;
  c_fa_spf: number;
}
export type CostConfig = string | CostParams;

export interface MinAdcfResult {
  /** Minimum normalized detection cost, in [0, 1]. */
  value: number;
  /** Threshold attaining it (may be -Infinity). */
  threshold: number;
}

export interface EerEntry {
  value: number;
  threshold: number;
  /** Present (and true) only on the pooled-negatives protocol. */
  discouraged?: boolean;
}

export interface EersResult {
  sv_eer: EerEntry;
  spf_eer: EerEntry;
  sasv_eer?: EerEntry;
}

export interface MinTdcfResult {
  value: number;
  t_asv: number;
  t_cm: number;
}

export type GateOrder = "cm-first" | "asv-first";

const LABEL_TOKENS = ["target", "nontarget", "spoof"] as const;
const LINES_PER_CHUNK = 65536;

/** Resolve the CLI command; override with ADCFKIT_CLI (whitespace-split). */
function cliCommand(): string[] {
  const env = process.env["ADCFKIT_CLI"];
  if (env && env.trim().length > 0) return env.trim().split(/\s+/);
  return ["python3", "-m", "adcfkit"];
}

export class CliError extends Error {
  readonly exitCode: number;
  constructor(name: string, message: string, exitCode: number) {
    super(message);
    this.name = name;
    this.exitCode = exitCode;
  }
}

function checkLabels(labels: IntArray, n: number): void {
  if (labels.length !== n) {
    throw new RangeError(
      `scores and labels must have equal length (${n} vs ${labels.length})`,
    );
  }
  for (let i = 0; i < labels.length; i++) {
    const v = labels[i] as number;
    if (v !== 0 && v !== 1 && v !== 2) {
      throw new RangeError(`label at index ${i} must be 0, 1, or 2, got ${v}`);
    }
  }
}

function formatScore(v: number): string {
  // the CLI accepts -inf for single scores; JS shortest round-trip
  // decimals parse back to the identical double in Python
  return v === -Infinity ? "-inf" : String(v);
}

// ---------------------------------------------------------------------------
// chunked serializers (single pass over each array)

type ChunkSource = () => Generator<string>;

function chunked(
  n: number,
  line: (i: number) => string,
): ChunkSource {
  return function* () {
    let buf: string[] = [];
    for (let i = 0; i < n; i++) {
      buf.push(line(i));
      if (buf.length === LINES_PER_CHUNK) {
        yield buf.join("\n") + "\n";
        buf = [];
      }
    }
    if (buf.length > 0) yield buf.join("\n") + "\n";
  };
}

function keyChunks(labels: IntArray): ChunkSource {
  return chunked(labels.length, (i) => `${i + 1} ${LABEL_TOKENS[labels[i] as 0 | 1 | 2]}`);
}

function scoreChunks(scores: NumericArray): ChunkSource {
  return chunked(scores.length, (i) => `${i + 1} ${formatScore(scores[i] as number)}`);
}

function dualChunks(asv: NumericArray, cm: NumericArray): ChunkSource {
  return chunked(
    asv.length,
    (i) => `${i + 1} ${formatScore(asv[i] as number)} ${formatScore(cm[i] as number)}`,
  );
}

// ---------------------------------------------------------------------------
// CLI invocation with streamed inputs

interface InputFile {
  path: string;
  chunks: ChunkSource;
}

let fifoProbe: boolean | null = null;

function fifosAvailable(): boolean {
  if (process.env["ADCFKIT_NO_FIFO"]) return false;
  if (process.platform === "win32") return false;
  if (fifoProbe === null) {
    const dir = fs.mkdtempSync(path.join(os.tmpdir(), "adcfkit-probe-"));
    try {
      const p = path.join(dir, "probe.fifo");
      fifoProbe = spawnSync("mkfifo", [p]).status === 0;
    } catch {
      fifoProbe = false;
    } finally {
      fs.rmSync(dir, { recursive: true, force: true });
    }
  }
  return fifoProbe;
}

/** Release a FIFO whose writer is pending or blocked (reader never came). */
function drainFifo(p: string): void {
  try {
    const fd = fs.openSync(p, fs.constants.O_RDONLY | fs.constants.O_NONBLOCK);
    const buf = Buffer.alloc(65536);
    try {
      while (fs.readSync(fd, buf, 0, buf.length, null) > 0) {
        // discard buffered bytes so a blocked writer unblocks
      }
    } catch {
      // EAGAIN: nothing buffered
    }
    fs.closeSync(fd);
  } catch {
    // no pending writer, nothing to do
  }
}

function streamToPath(filePath: string, chunks: ChunkSource): Promise<void> {
  return new Promise((resolve, reject) => {
    const ws = fs.createWriteStream(filePath);
    let failed = false;
    ws.on("error", (e) => {
      failed = true;
      reject(e);
    });
    const it = chunks()[Symbol.iterator]();
    const pump = (): void => {
      if (failed) return;
      for (;;) {
        const step = it.next();
        if (step.done) {
          ws.end(() => resolve());
          return;
        }
        if (!ws.write(step.value)) {
          ws.once("drain", pump);
          return;
        }
      }
    };
    ws.on("open", pump);
  });
}

function parseCliFailure(stderr: string, code: number): CliError {
  const line =
    stderr.split("\n").find((l) => l.startsWith("error: ")) ??
    `error: CliError: command failed with exit code ${code}`;
  const m = /^error: ([A-Za-z]+): (.*)$/.exec(line);
  return m
    ? new CliError(m[1] as string, m[2] as string, code)
    : new CliError("CliError", line.slice("error: ".length), code);
}

/**
 * Run the CLI with the given input files. With FIFO support the inputs
 * are streamed concurrently with the CLI run; otherwise they are written
 * to plain files first.
 */
async function runCliWithInputs(args: string[], inputs: InputFile[]): Promise<string> {
  const useFifo = inputs.length > 0 && fifosAvailable();
  if (useFifo) {
    const status = spawnSync("mkfifo", inputs.map((f) => f.path)).status;
    if (status !== 0) throw new CliError("CliError", "mkfifo failed", status ?? -1);
  } else {
    for (const f of inputs) {
      await streamToPath(f.path, f.chunks);
    }
  }

  const [cmd, ...prefix] = cliCommand();
  return new Promise((resolve, reject) => {
    const child = spawn(cmd as string, [...prefix, ...args], {
      stdio: ["ignore", "pipe", "pipe"],
    });
    const out: Buffer[] = [];
    const err: Buffer[] = [];
    let writersPending = 0;
    let settled = false;
    let exited: { code: number } | null = null;

    const finish = (): void => {
      if (settled || exited === null || writersPending > 0) return;
      settled = true;
      if (exited.code === 0) {
        resolve(Buffer.concat(out).toString("utf-8"));
      } else {
        reject(parseCliFailure(Buffer.concat(err).toString("utf-8"), exited.code));
      }
    };

    if (useFifo) {
      for (const f of inputs) {
        writersPending++;
        streamToPath(f.path, f.chunks)
          .catch(() => {
            // EPIPE after an early CLI exit; the CLI error is reported
          })
          .finally(() => {
            writersPending--;
            finish();
          });
      }
    }

    child.stdout.on("data", (c: Buffer) => out.push(c));
    child.stderr.on("data", (c: Buffer) => err.push(c));
    child.on("error", (e) => {
      if (!settled) {
        settled = true;
        reject(e);
      }
    });
    child.on("close", (code) => {
      exited = { code: code ?? -1 };
      if (code !== 0 && useFifo) {
        // unblock writers whose reader never arrived
        for (const f of inputs) drainFifo(f.path);
      }
      finish();
    });
  });
}

function configArgs(dir: string, cost: CostConfig): string[] {
  if (typeof cost === "string") return ["--config", cost];
  const p = path.join(dir, "cost.cfg");
  const body = (Object.keys(cost) as (keyof CostParams)[])
    .map((k) => `${k}=${String(cost[k])}`)
    .join("\n");
  fs.writeFileSync(p, body + "\n");
  return ["--config", p];
}

function parseThreshold(v: unknown): number {
  return v === "-inf" ? -Infinity : (v as number);
}

async function withTempDir<T>(fn: (dir: string) => Promise<T>): Promise<T> {
  const dir = fs.mkdtempSync(path.join(os.tmpdir(), "adcfkit-"));
  try {
    return await fn(dir);
  } finally {
    fs.rmSync(dir, { recursive: true, force: true });
  }
}

interface EvaluateReport {
  version: string;
  configs: {
    name: string;
    min_adcf: number;
    argmin_threshold: number | string;
  }[];
  eers: Record<
    string,
    { eer: number; threshold: number | string; discouraged?: boolean }
  >;
}

async function runEvaluate(
  dir: string,
  scores: NumericArray,
  labels: IntArray,
  cost: CostConfig,
  includeSasv: boolean,
): Promise<EvaluateReport> {
  const keysPath = path.join(dir, "trials.keys");
  const scoresPath = path.join(dir, "system.scores");
  const args = [
    "evaluate",
    "--keys", keysPath,
    "--scores", scoresPath,
    ...configArgs(dir, cost),
    "--format", "json",
  ];
  if (includeSasv) args.push("--include-sasv-eer");
  const stdout = await runCliWithInputs(args, [
    { path: keysPath, chunks: keyChunks(labels) },
    { path: scoresPath, chunks: scoreChunks(scores) },
  ]);
  return JSON.parse(stdout) as EvaluateReport;
}

/** Minimum normalized detection cost of a single-score system. */
export async function min_adcf(
  scores: NumericArray,
  labels: IntArray,
  cost: CostConfig = "adcf1",
): Promise<MinAdcfResult> {
  checkLabels(labels, scores.length);
  return withTempDir(async (dir) => {
    const report = await runEvaluate(dir, scores, labels, cost, false);
    const entry = report.configs[0];
    if (!entry) throw new CliError("CliError", "no config entry in report", -1);
    return { value: entry.min_adcf, threshold: parseThreshold(entry.argmin_threshold) };
  });
}

/** SV-EER and SPF-EER (plus SASV-EER when explicitly requested). */
export async function eers(
  scores: NumericArray,
  labels: IntArray,
  options: { includeSasv?: boolean } = {},
): Promise<EersResult> {
  checkLabels(labels, scores.length);
  return withTempDir(async (dir) => {
    const report = await runEvaluate(
      dir, scores, labels, "adcf1", options.includeSasv ?? false);
    const pick = (key: string): EerEntry => {
      const e = report.eers[key];
      if (!e) throw new CliError("CliError", `missing ${key} in report`, -1);
      const entry: EerEntry = { value: e.eer, threshold: parseThreshold(e.threshold) };
      if (e.discouraged) entry.discouraged = true;
      return entry;
    };
    const result: EersResult = { sv_eer: pick("sv_eer"), spf_eer: pick("spf_eer") };
    if (options.includeSasv) result.sasv_eer = pick("sasv_eer");
    return result;
  });
}

/** Minimum normalized tandem cost of a paired (ASV, CM) system. */
export async function min_tdcf(
  asvScores: NumericArray,
  cmScores: NumericArray,
  labels: IntArray,
  cost: CostConfig = "adcf1",
  options: { frozenAsv?: number } = {},
): Promise<MinTdcfResult> {
  if (asvScores.length !== cmScores.length) {
    throw new RangeError("asvScores and cmScores must have equal length");
  }
  checkLabels(labels, asvScores.length);
  return withTempDir(async (dir) => {
    const keysPath = path.join(dir, "trials.keys");
    const dualPath = path.join(dir, "system.dual");
    const args = [
      "tandem-eval",
      "--keys", keysPath,
      "--dual-scores", dualPath,
      ...configArgs(dir, cost),
      "--format", "json",
    ];
    if (options.frozenAsv !== undefined) {
      args.push("--mode", "frozen-asv", "--t-asv", String(options.frozenAsv));
    }
    const stdout = await runCliWithInputs(args, [
      { path: keysPath, chunks: keyChunks(labels) },
      { path: dualPath, chunks: dualChunks(asvScores, cmScores) },
    ]);
    const report = JSON.parse(stdout) as {
      configs: {
        min_tdcf: number;
        argmin: { t_asv: number | string; t_cm: number | string };
      }[];
    };
    const entry = report.configs[0];
    if (!entry) throw new CliError("CliError", "no config entry in report", -1);
    return {
      value: entry.min_tdcf,
      t_asv: parseThreshold(entry.argmin.t_asv),
      t_cm: parseThreshold(entry.argmin.t_cm),
    };
  });
}

/**
 * Collapse a dual-score system into gated single scores (trial order
 * preserved; gated-out trials become -Infinity).
 */
export async function gate_scores(
  asvScores: NumericArray,
  cmScores: NumericArray,
  order: GateOrder,
  tGate: number,
): Promise<Float64Array> {
  if (asvScores.length !== cmScores.length) {
    throw new RangeError("asvScores and cmScores must have equal length");
  }
  return withTempDir(async (dir) => {
    const dualPath = path.join(dir, "system.dual");
    const outPath = path.join(dir, "gated.scores");
    await runCliWithInputs(
      [
        "gate",
        "--dual-scores", dualPath,
        "--order", order,
        `--t-gate=${tGate === -Infinity ? "-inf" : String(tGate)}`,
        "--out", outPath,
      ],
      [{ path: dualPath, chunks: dualChunks(asvScores, cmScores) }],
    );
    const result = new Float64Array(asvScores.length);
    const text = fs.readFileSync(outPath, "utf-8");
    let seen = 0;
    for (const line of text.split("\n")) {
      if (!line) continue;
      const sp = line.indexOf(" ");
      const id = Number(line.slice(0, sp));
      const tok = line.slice(sp + 1);
      result[id - 1] = tok === "-inf" ? -Infinity : Number(tok);
      seen++;
    }
    if (seen !== asvScores.length) {
      throw new CliError(
        "CliError", `expected ${asvScores.length} gated scores, got ${seen}`, -1);
    }
    return result;
  });
}

/** Version of the underlying metrics tool (mirrored by this package). */
export async function version(): Promise<string> {
  const out = await runCliWithInputs(["--version"], []);
  return out.trim().replace(/^adcfkit\s+/, "");
}
