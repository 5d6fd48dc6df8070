/** Synthetic result files shaped like the simulator's CSV outputs. */

export function sindrFixture(): string {
  const lines = ["dtau,deps,analytical_sindr_db,simulated_sindr_db,dac_mode"];
  const value = (dtau: number, deps: number, mode: string): number =>
    (mode === "one_bit" ? 12 : 16) - 0.01 * dtau * dtau - 40 * deps;
  for (const deps of [0, 0.01]) {
    for (const dtau of [-8, -4, 0, 4, 8]) {
      for (const mode of ["one_bit", "infinite"]) {
        const v = value(dtau, deps, mode);
        lines.push(`${dtau},${deps},${v},${v + 0.05},${mode}`);
      }
    }
  }
  for (const dtau of [0, 4]) {
    for (const deps of [1e-4, 1e-3, 3e-3, 1e-2, 1e-1]) {
      for (const mode of ["one_bit", "infinite"]) {
        const v = value(dtau, deps, mode);
        lines.push(`${dtau},${deps},${v},${v - 0.05},${mode}`);
      }
    }
  }
  return lines.join("\n") + "\n";
}

export function rmseFixture(): string {
  const lines = ["snr_db,dac_mode,sto_rmse_samples,cfo_rmse"];
  for (const snr of [-8, -4, 0, 4, 8]) {
    for (const mode of ["one_bit", "infinite"]) {
      const drop = mode === "one_bit" ? snr - 2 : snr;
      lines.push(`${snr},${mode},${10 ** (-drop / 10)},${0.1 * 10 ** (-drop / 10)}`);
    }
  }
  return lines.join("\n") + "\n";
}

export function berFixture(): string {
  const lines = ["snr_db,dac_mode,sync_mode,ber"];
  for (const snr of [-4, 0, 4, 8]) {
    for (const mode of ["one_bit", "infinite"]) {
      for (const sync of ["schmidl_cox", "perfect"]) {
        let ber = 0.5 * 10 ** (-(snr + 6) / 10);
        if (sync === "schmidl_cox") ber *= 1.8;
        // the clean high-SNR cell counts zero errors: must survive the log axis
        if (snr === 8 && mode === "infinite" && sync === "perfect") ber = 0;
        lines.push(`${snr},${mode},${sync},${ber}`);
      }
    }
  }
  return lines.join("\n") + "\n";
}
