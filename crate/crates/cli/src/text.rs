//! Aligned plain-text views of the JSON reports.

use std::fmt::Write;

use crate::{AnalysisReport, PerturbOutput, Render, SimulateReport, VerifyReport};

fn num(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.6}")
    }
}

fn row(label: &str, values: impl IntoIterator<Item = f64>) -> String {
    let cells: Vec<String> = values
        .into_iter()
        .map(|v| format!("{:>12}", num(v)))
        .collect();
    format!("{label:<24}{}\n", cells.join(""))
}

fn line(out: &mut String, label: &str, value: impl std::fmt::Display) {
    let _ = writeln!(out, "{label:<24}{value}");
}

fn classes(c: &[Vec<usize>]) -> String {
    c.iter()
        .map(|cl| {
            format!(
                "{{{}}}",
                cl.iter()
                    .map(|i| (i + 1).to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            )
        })
        .collect::<Vec<_>>()
        .join(" ")
}

impl Render for AnalysisReport {
    fn render_text(&self) -> String {
        let mut out = String::new();
        let s = &self.structure;
        line(&mut out, "states", self.states.join(" "));
        line(&mut out, "recurrent class", classes(&s.recurrent_classes));
        line(&mut out, "transient", classes(std::slice::from_ref(&s.transient)));
        line(
            &mut out,
            "period",
            s.period().map_or("-".into(), |p| p.to_string()),
        );
        line(&mut out, "rho", num(self.rho));
        line(&mut out, "bias span", num(self.span));
        line(&mut out, "diameter", num(self.diameter));
        line(&mut out, "kemeny", num(self.kemeny.eta));
        out.push('\n');
        let header: Vec<String> = self.states.iter().map(|l| format!("{l:>12}")).collect();
        let _ = writeln!(out, "{:<24}{}", "", header.join(""));
        out += &row("reward", self.reward.iter().copied());
        out += &row("mu", self.mu.iter().copied());
        out += &row("bias (canonical)", self.bias.canonical.iter().copied());
        out += &row("bias (passage)", self.bias.passage_formula.iter().copied());
        out += &row("kemeny per state", self.kemeny.per_state.iter().copied());
        for (label, r) in self.states.iter().zip(&self.tau) {
            out += &row(&format!("tau from {label}"), r.iter().copied());
        }
        out.push('\n');
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{:<36}{:>14.3e}  <= {:<10.1e}{}",
                c.name,
                c.value,
                c.tolerance,
                if c.passed { "ok" } else { "FAIL" }
            );
        }
        out
    }
}

impl Render for PerturbOutput {
    fn render_text(&self) -> String {
        let r = &self.report;
        let mut out = String::new();
        line(&mut out, "||P - P~||_inf", num(r.inf_norm_delta));
        line(&mut out, "perturbed classes", classes(&r.perturbed_classes));
        line(
            &mut out,
            "eta / eta_max",
            format!("{} / {}", num(r.eta), num(r.eta_max)),
        );
        line(&mut out, "kemeny l1 bound", num(r.hunter_bound));
        line(
            &mut out,
            "subset l1 bound",
            format!(
                "{} ({})",
                num(r.corollary_l1_bound),
                if r.corollary_exact {
                    "exact"
                } else {
                    "sampled"
                }
            ),
        );
        out += &row("mu", r.mu.iter().copied());
        out += &row("per-state bound", r.per_state_bounds.iter().copied());
        for (k, &s) in r.starts.iter().enumerate() {
            out.push('\n');
            line(&mut out, "start", s + 1);
            out += &row("  mu~", r.mu_tilde[k].iter().copied());
            out += &row("  |mu - mu~|", r.actuals.per_state[k].iter().copied());
            line(
                &mut out,
                "  l1",
                format!(
                    "{}  (subset ratio {})",
                    num(r.actuals.l1[k]),
                    num(r.tightness.l1_corollary[k])
                ),
            );
            line(
                &mut out,
                "  |rho - rho~|",
                format!(
                    "{}  (ratio {})",
                    num(r.actuals.rho_deviation[k]),
                    num(r.tightness.rho[k])
                ),
            );
        }
        out.push('\n');
        if r.violations.is_empty() {
            out += "all bounds hold\n";
        } else {
            for v in &r.violations {
                let _ = writeln!(out, "VIOLATION {v}");
            }
        }
        out
    }
}

impl Render for SimulateReport {
    fn render_text(&self) -> String {
        let mut out = String::new();
        line(&mut out, "start", self.start + 1);
        line(&mut out, "horizon", self.ell);
        line(&mut out, "replicas", self.replicas);
        line(&mut out, "rho", num(self.rho));
        line(&mut out, "bias span", num(self.span));
        line(&mut out, "||P - P~||_inf", num(self.inf_norm_delta));
        let _ = writeln!(
            out,
            "\n{:>8}{:>12}{:>12}{:>14}{:>14}{:>8}",
            "delta", "freq", "allowed", "mean lhs", "rhs", ""
        );
        for s in &self.summaries {
            let _ = writeln!(
                out,
                "{:>8}{:>12.5}{:>12.5}{:>14.4}{:>14.4}{:>8}",
                s.delta,
                s.frequency,
                s.tolerance,
                s.mean_lhs,
                s.rhs,
                if s.passed { "ok" } else { "FAIL" }
            );
        }
        out
    }
}

impl Render for VerifyReport {
    fn render_text(&self) -> String {
        let mut out = String::new();
        if let Some(w) = &self.warning {
            let _ = writeln!(out, "warning: {w}");
        }
        for p in &self.properties {
            let _ = writeln!(
                out,
                "{:<28}{:>8} checked{:>8} failed",
                p.name, p.checked, p.failed
            );
        }
        for f in &self.failures {
            let _ = writeln!(out, "FAIL {} seed {}: {}", f.property, f.seed, f.detail);
        }
        let _ = writeln!(out, "{}", if self.passed { "PASS" } else { "FAIL" });
        out
    }
}
