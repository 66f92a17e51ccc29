/**
 * Gym-style bindings for the tunnelsim environments.
 *
 * A BoundEnv owns one `tunnelsim serve` process and forwards reset/step
 * through it; observations and actions cross the boundary as plain number
 * arrays (one JSON copy per step, no shared memory). All episode logic stays
 * in the core.
 */

import { spawnSync } from 'node:child_process';
import { mkdtempSync, readFileSync, writeFileSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';

import { CoreServer, ServerOptions, pythonCommand } from './transport.js';

export interface SpaceInfo {
  shape: number[];
  low: Array<number | null>;
  high: Array<number | null>;
  dims?: string[];
}

export type ResetResult = [number[], Record<string, unknown>];
export type StepResult = [
  observation: number[],
  reward: number,
  terminated: boolean,
  truncated: boolean,
  info: Record<string, unknown>,
];

export type EnvConfig = Record<string, unknown>;

export class BoundEnv {
  readonly observationSpace: SpaceInfo;
  readonly actionSpace: SpaceInfo;
  readonly configHash: string;

  private constructor(
    private server: CoreServer,
    observationSpace: SpaceInfo,
    actionSpace: SpaceInfo,
    configHash: string,
  ) {
    this.observationSpace = observationSpace;
    this.actionSpace = actionSpace;
    this.configHash = configHash;
  }

  /** Construct a core environment; `config` uses the run-config schema
   *  (environment / env / world / mission blocks). */
  static async make(config: EnvConfig, opts?: ServerOptions): Promise<BoundEnv> {
    const server = new CoreServer(opts);
    const resp = await server.request({ op: 'make', config });
    if (!resp.ok) {
      await server.close();
      throw new Error(`make failed: ${resp.error}`);
    }
    return new BoundEnv(
      server,
      resp.observation_space as SpaceInfo,
      resp.action_space as SpaceInfo,
      (resp.config_hash as string) ?? '',
    );
  }

  async reset(seed?: number): Promise<ResetResult> {
    const resp = await this.server.request({ op: 'reset', seed: seed ?? null });
    if (!resp.ok) throw new Error(`reset failed: ${resp.error}`);
    return [resp.observation as number[], resp.info as Record<string, unknown>];
  }

  /** `action` is a number array in [-1, 1]^k, or null for the mission
   *  environment's onboard autopilot mode. */
  async step(action: number[] | null): Promise<StepResult> {
    const resp = await this.server.request({ op: 'step', action });
    if (!resp.ok) throw new Error(`step failed: ${resp.error}`);
    return [
      resp.observation as number[],
      resp.reward as number,
      resp.terminated as boolean,
      resp.truncated as boolean,
      resp.info as Record<string, unknown>,
    ];
  }

  async close(): Promise<void> {
    await this.server.close();
  }
}

export function make(config: EnvConfig, opts?: ServerOptions): Promise<BoundEnv> {
  return BoundEnv.make(config, opts);
}

// --- parity against the core CLI ---

export interface ParityReport {
  steps: number;
  maxDivergence: number;
  configHashMatch: boolean;
  recordCountMatch: boolean;
}

/** Deterministic action source (mulberry32); both sides replay the same
 *  tape, so only reproducibility matters. */
function actionTape(nSteps: number, seed: number, dims: number): number[][] {
  let a = seed >>> 0;
  const next = () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return (((t ^ (t >>> 14)) >>> 0) / 4294967296) * 0.6 - 0.3;
  };
  return Array.from({ length: nSteps }, () =>
    Array.from({ length: dims }, () => next()),
  );
}

const PARITY_CONFIG: EnvConfig = {
  environment: 'tunnel',
  env: {
    observation_mode: 'sensor_plus_state',
    frame_stack: 4,
    max_steps: 2000,
    sensor: {
      az_min: -60.0, az_max: 60.0, az_step: 60.0,
      el_min: -60.0, el_max: 60.0, el_step: 60.0,
    },
  },
};

/**
 * Drive an identical seeded action tape through the binding and through
 * `tunnelsim run --replay --record-obs`, and compare observations, rewards
 * and flags record by record. Exact equality is required: both sides are the
 * same core, and JSON round-trips doubles losslessly.
 */
export async function parityCheck(
  nSteps: number,
  seed: number,
  opts?: ServerOptions,
): Promise<ParityReport> {
  const env = await make(PARITY_CONFIG, opts);
  const dims = env.actionSpace.shape[0];
  const tape = actionTape(nSteps, seed, dims);

  // binding side
  const bound: Array<{ obs: number[]; reward: number; term: boolean; trunc: boolean }> = [];
  await env.reset(seed);
  for (const action of tape) {
    const [obs, reward, terminated, truncated] = await env.step(action);
    bound.push({ obs, reward, term: terminated, trunc: truncated });
    if (terminated || truncated) break;
  }
  await env.close();

  // core CLI side
  const dir = mkdtempSync(join(tmpdir(), 'tunnelsim-parity-'));
  const tapePath = join(dir, 'tape.jsonl');
  const cfgPath = join(dir, 'cfg.json');
  const outPath = join(dir, 'traj.jsonl');
  const tapeLines = [JSON.stringify({ kind: 'actions', format_version: 1 })];
  tape.forEach((action, i) =>
    tapeLines.push(JSON.stringify({ episode: 0, step: i, action })),
  );
  writeFileSync(tapePath, tapeLines.join('\n') + '\n');
  writeFileSync(cfgPath, JSON.stringify({ ...PARITY_CONFIG, seed, episodes: 1 }));
  const run = spawnSync(
    pythonCommand(opts),
    ['-m', 'tunnelsim', 'run', '--config', cfgPath, '--replay', tapePath,
     '--record-obs', '--out', outPath],
    { encoding: 'utf-8' },
  );
  if (run.status !== 0) {
    throw new Error(`core replay failed: ${run.stderr}`);
  }
  const lines = readFileSync(outPath, 'utf-8').trim().split('\n');
  const header = JSON.parse(lines[0]) as Record<string, unknown>;
  const records = lines.slice(1).map((l) => JSON.parse(l));

  let maxDivergence = bound.length === records.length ? 0 : Infinity;
  const n = Math.min(bound.length, records.length);
  for (let i = 0; i < n; i++) {
    const a = bound[i];
    const b = records[i];
    if (a.obs.length !== b.observation.length) {
      maxDivergence = Infinity;
      break;
    }
    for (let k = 0; k < a.obs.length; k++) {
      maxDivergence = Math.max(maxDivergence, Math.abs(a.obs[k] - b.observation[k]));
    }
    maxDivergence = Math.max(maxDivergence, Math.abs(a.reward - b.reward));
    if (a.term !== b.terminated || a.trunc !== b.truncated) {
      maxDivergence = Infinity;
    }
  }
  return {
    steps: bound.length,
    maxDivergence,
    configHashMatch: header.config_hash === env.configHash,
    recordCountMatch: bound.length === records.length,
  };
}
