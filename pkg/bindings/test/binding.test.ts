import { execFileSync } from "node:child_process";
import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";
import { afterAll, describe, expect, it } from "vitest";

import {
  eers,
  gate_scores,
  min_adcf,
  min_tdcf,
  version,
  type CostParams,
} from "../src/index.js";

const CLI = ["python3", "-m", "adcfkit"];

function runCliJson(args: string[]): any {
  const [cmd, ...rest] = CLI;
  return JSON.parse(execFileSync(cmd!, [...rest, ...args], { encoding: "utf-8" }));
}

function runCliRaw(args: string[]): string {
  const [cmd, ...rest] = CLI;
  return execFileSync(cmd!, [...rest, ...args], { encoding: "utf-8" });
}

const tmpRoot = fs.mkdtempSync(path.join(os.tmpdir(), "adcfkit-ts-tests-"));
afterAll(() => fs.rmSync(tmpRoot, { recursive: true, force: true }));

/** Deterministic fixture: keys/scores files plus the matching arrays. */
function makeFixture(seed: number, dual: boolean) {
  const dir = fs.mkdtempSync(path.join(tmpRoot, "fix-"));
  const prefix = path.join(dir, "fx");
  const tar = dual ? `2,1,1.5,1,${12 + (seed % 5)}` : `2,1,${12 + (seed % 5)}`;
  const non = dual ? `0,1,1.5,1,${9 + (seed % 4)}` : `0,1,${9 + (seed % 4)}`;
  const spf = dual ? `0.5,1,-1.5,1,${11 + (seed % 3)}` : `-1,1.2,${11 + (seed % 3)}`;
  const args = ["synth", "--seed", String(seed), "--out-prefix", prefix,
                ...(dual ? ["--dual"] : []),
                `--tar=${tar}`, `--non=${non}`, `--spf=${spf}`];
  runCliRaw(args);

  const keysPath = `${prefix}.keys`;
  const scoresPath = dual ? `${prefix}.dualscores` : `${prefix}.scores`;
  const labelFor: Record<string, number> = { target: 0, nontarget: 1, spoof: 2 };
  const labels: number[] = [];
  for (const line of fs.readFileSync(keysPath, "utf-8").split("\n")) {
    if (!line) continue;
    labels.push(labelFor[line.split(" ")[1]!]!);
  }
  const col1: number[] = [];
  const col2: number[] = [];
  for (const line of fs.readFileSync(scoresPath, "utf-8").split("\n")) {
    if (!line) continue;
    const parts = line.split(" ");
    col1.push(Number(parts[1]));
    if (dual) col2.push(Number(parts[2]));
  }
  return { keysPath, scoresPath, labels, col1, col2 };
}

describe("binding fidelity against the CLI", () => {
  it("min_adcf matches CLI JSON bit for bit on 20 fixtures", async () => {
    for (let seed = 1; seed <= 20; seed++) {
      const fx = makeFixture(seed, false);
      const want = runCliJson([
        "evaluate", "--keys", fx.keysPath, "--scores", fx.scoresPath,
        "--config", "adcf1", "--format", "json",
      ]).configs[0];
      const got = await min_adcf(fx.col1, fx.labels, "adcf1");
      expect(got.value).toBe(want.min_adcf);
      const wantT = want.argmin_threshold === "-inf" ? -Infinity : want.argmin_threshold;
      expect(got.threshold).toBe(wantT);
    }
  }, 120000);

  it("eers match CLI JSON bit for bit on 20 fixtures", async () => {
    for (let seed = 21; seed <= 40; seed++) {
      const fx = makeFixture(seed, false);
      const want = runCliJson([
        "evaluate", "--keys", fx.keysPath, "--scores", fx.scoresPath,
        "--config", "adcf1", "--include-sasv-eer", "--format", "json",
      ]).eers;
      const got = await eers(fx.col1, fx.labels, { includeSasv: true });
      for (const key of ["sv_eer", "spf_eer", "sasv_eer"] as const) {
        expect(got[key]!.value).toBe(want[key].eer);
        expect(got[key]!.threshold).toBe(want[key].threshold);
      }
      expect(got.sasv_eer!.discouraged).toBe(true);
      expect(got.sv_eer.discouraged).toBeUndefined();
    }
  }, 120000);

  it("min_tdcf matches CLI JSON on dual fixtures (grid and frozen)", async () => {
    for (const seed of [51, 52, 53]) {
      const fx = makeFixture(seed, true);
      const want = runCliJson([
        "tandem-eval", "--keys", fx.keysPath, "--dual-scores", fx.scoresPath,
        "--config", "adcf2", "--format", "json",
      ]).configs[0];
      const got = await min_tdcf(fx.col1, fx.col2, fx.labels, "adcf2");
      expect(got.value).toBe(want.min_tdcf);

      const wantFrozen = runCliJson([
        "tandem-eval", "--keys", fx.keysPath, "--dual-scores", fx.scoresPath,
        "--config", "adcf2", "--mode", "frozen-asv", "--t-asv", "0.5",
        "--format", "json",
      ]).configs[0];
      const gotFrozen = await min_tdcf(fx.col1, fx.col2, fx.labels, "adcf2",
                                       { frozenAsv: 0.5 });
      expect(gotFrozen.value).toBe(wantFrozen.min_tdcf);
      expect(gotFrozen.t_asv).toBe(0.5);
    }
  }, 120000);

  it("reproduces known small-dataset values", async () => {
    // one nontarget above the targets: min cost = (10*0.01*0.5)/0.6
    const scores = [2.0, 3.0, 0.0, 2.5, 1.0];
    const labels = [0, 0, 1, 1, 2];
    const r = await min_adcf(scores, labels, "adcf1");
    expect(r.value).toBeCloseTo(0.05 / 0.6, 12);
    expect(r.threshold).toBe(2.0);

    const separable = await min_adcf([2, 3, 0, 1], [0, 0, 1, 2], "adcf1");
    expect(separable.value).toBe(0);
    expect(separable.threshold).toBe(2.0);
  });

  it("explicit cost params equal the preset they spell out", async () => {
    const fx = makeFixture(61, false);
    const preset = await min_adcf(fx.col1, fx.labels, "adcf1");
    const spelled: CostParams = {
      pi_tar: 0.94, pi_non: 0.01, pi_spf: 0.05,
      c_miss: 1, c_fa_non: 10, c_fa_spf: 10,
    };
    const custom = await min_adcf(fx.col1, fx.labels, spelled);
    expect(custom.value).toBe(preset.value);
    expect(custom.threshold).toBe(preset.threshold);
  });
});

describe("gate_scores", () => {
  it("applies the gate rule in trial order", async () => {
    const asv = [3.1, 2.5, 0.2, -0.5];
    const cm = [1.0, -1.0, 1.0, -1.0];
    const gated = await gate_scores(asv, cm, "cm-first", 0);
    expect(Array.from(gated)).toEqual([3.1, -Infinity, 0.2, -Infinity]);
    const swapped = await gate_scores(asv, cm, "asv-first", 0);
    expect(Array.from(swapped)).toEqual([1.0, -1.0, 1.0, -Infinity]);
  });

  it("round-trips through min_adcf like the CLI pipeline", async () => {
    const fx = makeFixture(71, true);
    const gated = await gate_scores(fx.col1, fx.col2, "cm-first", 0.5);
    const viaBinding = await min_adcf(gated, fx.labels, "adcf1");

    const gatedPath = path.join(tmpRoot, "gated-71.scores");
    runCliRaw(["gate", "--dual-scores", fx.scoresPath, "--order", "cm-first",
               "--t-gate", "0.5", "--out", gatedPath]);
    const want = runCliJson([
      "evaluate", "--keys", fx.keysPath, "--scores", gatedPath,
      "--config", "adcf1", "--format", "json",
    ]).configs[0];
    expect(viaBinding.value).toBe(want.min_adcf);
  });
});

describe("error mapping", () => {
  it("carries the primary error name", async () => {
    await expect(min_adcf([1.0], [0])).rejects.toMatchObject({
      name: "EmptyClassError",
    });
    await expect(min_adcf([1.0, 0.0, -1.0], [0, 1, 2], "no-such-config"))
      .rejects.toMatchObject({ name: "InputError" });
  });

  it("validates the label encoding locally", async () => {
    await expect(min_adcf([1.0, 2.0], [0, 3])).rejects.toBeInstanceOf(RangeError);
    await expect(min_adcf([1.0, 2.0], [0])).rejects.toBeInstanceOf(RangeError);
  });

  it("degenerate cost model surfaces by name", async () => {
    const bad: CostParams = {
      pi_tar: 1, pi_non: 0, pi_spf: 0, c_miss: 1, c_fa_non: 1, c_fa_spf: 1,
    };
    await expect(min_adcf([1.0, 0.0, -1.0], [0, 1, 2], bad))
      .rejects.toMatchObject({ name: "DegenerateModelError" });
  });
});

describe("version", () => {
  it("mirrors the primary tool version", async () => {
    const v = await version();
    expect(runCliRaw(["--version"]).trim()).toBe(`adcfkit ${v}`);
  });
});
