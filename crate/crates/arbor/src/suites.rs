//! Named verification suites at fixed, reproducible configurations.

use anyhow::{anyhow, bail, Result};
use arbor_core::model::PathSpec;
use arbor_core::verify::{
    basis_suite, chen_suite, confluence_suite, derivation_suite, duality_suite, hk_suite, postlie_suite, prelie_suite,
    psi_suite, theta_suite, Report,
};
use arbor_core::workspace::Workspace;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// In the order of the acceptance criteria they back.
pub const SUITES: [&str; 10] =
    ["prelie", "duality", "postlie", "theta", "basis", "psi", "confluence", "derivations", "chen", "hk"];

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub dim: usize,
    /// Grade bound `K` of the sweeps.
    pub max_edges: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { dim: 2, max_edges: 3, seed: 7 }
    }
}

fn capped(dim: usize, node: u16, max_edges: Option<usize>) -> Workspace {
    let ws = Workspace::new(dim).with_caps(node, 1).with_total_caps(Some(node as u32), Some(1));
    match max_edges {
        Some(n) => ws.with_max_edges(n),
        None => ws,
    }
}

fn source(seed: u64) -> impl FnMut(usize) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    move |n| rng.gen_range(0..n.max(1))
}

/// Expands `all` and rejects unknown names.
pub fn resolve(name: &str) -> Result<Vec<&'static str>> {
    if name == "all" {
        return Ok(SUITES.to_vec());
    }
    SUITES
        .iter()
        .find(|s| **s == name)
        .map(|s| vec![*s])
        .ok_or_else(|| anyhow!("unknown suite {name:?}; expected one of {} or all", SUITES.join(", ")))
}

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<Report> {
    let k = cfg.max_edges.max(1);
    let d = cfg.dim;
    let ws = Workspace::new(d).with_caps(1, 1).with_lmax(k as u32);
    let mut pick = source(cfg.seed);
    let r = match name {
        "prelie" => prelie_suite(&ws, k),
        "postlie" => postlie_suite(&ws, (k - 1).max(1), k),
        "duality" => duality_suite(&ws, k),
        "theta" => theta_suite(&ws, (k - 1).max(1), k, 200, &mut pick),
        "basis" => basis_suite(&ws, k + 1, k, 100, &mut pick),
        "psi" => psi_suite(&capped(d, k as u16, None), &capped(d, 1, None), k, 200, &mut pick),
        "confluence" => {
            let mut first = source(cfg.seed + 1);
            let mut second = source(cfg.seed + 2);
            confluence_suite(&capped(d, k as u16, Some(6)), 500, 6, &mut pick, &mut first, &mut second)
        }
        "derivations" => derivation_suite(&ws, k),
        "chen" => {
            let path = match d {
                1 => "t",
                2 => "t ; 1/2 t^2",
                _ => bail!("the chen suite drives a path in one or two components"),
            };
            chen_suite(&PathSpec::parse(path)?, k, 100, &mut pick)
        }
        "hk" => hk_suite(d, k),
        _ => return resolve(name).and_then(|_| bail!("suite {name:?} cannot run on its own")),
    };
    Ok(r?)
}

/// One summary line, then notes and violations indented.
pub fn format_report(r: &Report, secs: f64) -> String {
    let mut s = format!(
        "{} {}: {} instances, {} failures ({secs:.1}s)\n",
        if r.holds() { "PASS" } else { "FAIL" },
        r.name,
        r.instances,
        r.failures
    );
    for n in &r.notes {
        s.push_str(&format!("  note: {n}\n"));
    }
    for v in &r.violations {
        s.push_str(&format!("  violation: {v}\n"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_resolve() {
        assert_eq!(resolve("all").unwrap().len(), 10);
        assert_eq!(resolve("chen").unwrap(), vec!["chen"]);
        assert!(resolve("lie").is_err());
    }

    #[test]
    fn small_suites_hold() {
        let cfg = SuiteConfig { max_edges: 2, ..Default::default() };
        for name in ["prelie", "hk", "confluence"] {
            let r = run_suite(name, &cfg).unwrap();
            assert!(r.holds(), "{}", format_report(&r, 0.0));
        }
    }
}
