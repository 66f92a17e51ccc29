/**
 * JSON-lines transport to a `tunnelsim serve` child process.
 *
 * The server answers requests strictly in order, so a FIFO of pending
 * promises is enough to match responses to calls.
 */

import { spawn, ChildProcess } from 'node:child_process';
import { createInterface, Interface } from 'node:readline';

export interface ServerOptions {
  /** Interpreter used to launch the core; override with TUNNELSIM_PYTHON. */
  pythonCmd?: string;
  /** Extra arguments placed before `-m tunnelsim serve`. */
  pythonArgs?: string[];
}

export interface ServerResponse {
  ok: boolean;
  error?: string;
  [key: string]: unknown;
}

interface Pending {
  resolve: (value: ServerResponse) => void;
  reject: (err: Error) => void;
}

export function pythonCommand(opts?: ServerOptions): string {
  return opts?.pythonCmd ?? process.env.TUNNELSIM_PYTHON ?? 'python3';
}

export class CoreServer {
  private child: ChildProcess;
  private lines: Interface;
  private pending: Pending[] = [];
  private closed = false;

  constructor(opts?: ServerOptions) {
    const cmd = pythonCommand(opts);
    const args = [...(opts?.pythonArgs ?? []), '-m', 'tunnelsim', 'serve'];
    this.child = spawn(cmd, args, { stdio: ['pipe', 'pipe', 'inherit'] });
    this.lines = createInterface({ input: this.child.stdout! });
    this.lines.on('line', (line) => {
      const waiter = this.pending.shift();
      if (!waiter) return;
      try {
        waiter.resolve(JSON.parse(line) as ServerResponse);
      } catch (err) {
        waiter.reject(new Error(`bad server line: ${line}`));
      }
    });
    this.child.on('exit', (code) => {
      this.closed = true;
      const err = new Error(`tunnelsim serve exited with code ${code}`);
      for (const waiter of this.pending.splice(0)) waiter.reject(err);
    });
    this.child.on('error', (err) => {
      this.closed = true;
      for (const waiter of this.pending.splice(0)) waiter.reject(err);
    });
  }

  request(message: Record<string, unknown>): Promise<ServerResponse> {
    if (this.closed) {
      return Promise.reject(new Error('server process is closed'));
    }
    return new Promise((resolve, reject) => {
      this.pending.push({ resolve, reject });
      this.child.stdin!.write(JSON.stringify(message) + '\n');
    });
  }

  async close(): Promise<void> {
    if (this.closed) return;
    try {
      await this.request({ op: 'close' });
    } catch {
      /* already gone */
    }
    this.closed = true;
    this.child.stdin?.end();
    this.child.kill();
  }
}
