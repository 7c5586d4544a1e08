//! Workspace settings from command-line flags and flat `key = value` files.

use anyhow::{bail, Context, Result};
use arbor_core::multiindex::MultiIndex;
use arbor_core::parse::parse_multiindex;
use arbor_core::workspace::{CoefficientMode, Workspace};

/// Every field is optional so that flags, a config file and per-command
/// defaults can be layered.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Settings {
    pub dim: Option<usize>,
    pub scaling: Option<String>,
    pub max_edges: Option<usize>,
    pub max_node_dec: Option<u16>,
    pub max_edge_shift: Option<u16>,
    pub max_node_total: Option<u32>,
    pub max_shift_total: Option<u32>,
    pub lmax: Option<u32>,
    pub kinds: Option<u8>,
    pub float: Option<bool>,
}

fn value<T: std::str::FromStr>(key: &str, v: &str) -> Result<T>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    v.parse().with_context(|| format!("bad value {v:?} for {key}"))
}

impl Settings {
    /// Parses `key = value` lines; `#` starts a comment. Keys accept `-` or `_`.
    pub fn parse_config(text: &str) -> Result<Settings> {
        let mut s = Settings::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                bail!("config line {}: expected key = value", n + 1);
            };
            let (k, v) = (k.trim().replace('_', "-"), v.trim());
            match k.as_str() {
                "dim" => s.dim = Some(value(&k, v)?),
                "scaling" => s.scaling = Some(v.to_string()),
                "max-edges" => s.max_edges = Some(value(&k, v)?),
                "max-node-dec" => s.max_node_dec = Some(value(&k, v)?),
                "max-edge-shift" => s.max_edge_shift = Some(value(&k, v)?),
                "max-node-total" => s.max_node_total = Some(value(&k, v)?),
                "max-shift-total" => s.max_shift_total = Some(value(&k, v)?),
                "lmax" => s.lmax = Some(value(&k, v)?),
                "kinds" => s.kinds = Some(value(&k, v)?),
                "mode" => {
                    s.float = Some(match v {
                        "exact" => false,
                        "float" => true,
                        _ => bail!("config line {}: mode must be exact or float", n + 1),
                    })
                }
                _ => bail!("config line {}: unknown key {k:?}", n + 1),
            }
        }
        Ok(s)
    }

    /// Fields set in `self` win over those in `other`.
    pub fn over(self, other: Settings) -> Settings {
        Settings {
            dim: self.dim.or(other.dim),
            scaling: self.scaling.or(other.scaling),
            max_edges: self.max_edges.or(other.max_edges),
            max_node_dec: self.max_node_dec.or(other.max_node_dec),
            max_edge_shift: self.max_edge_shift.or(other.max_edge_shift),
            max_node_total: self.max_node_total.or(other.max_node_total),
            max_shift_total: self.max_shift_total.or(other.max_shift_total),
            lmax: self.lmax.or(other.lmax),
            kinds: self.kinds.or(other.kinds),
            float: self.float.or(other.float),
        }
    }

    pub fn workspace(&self) -> Result<Workspace> {
        let dim = self.dim.unwrap_or(2);
        let mut ws = Workspace::new(dim);
        if let Some(s) = &self.scaling {
            ws.scaling = parse_multiindex(s, dim).context("--scaling")?;
        } else {
            ws.scaling = MultiIndex::from_slice(&vec![1; dim]);
        }
        if let Some(n) = self.max_edges {
            ws.max_edges = n;
        }
        if let Some(n) = self.max_node_dec {
            ws.max_node_dec = n;
        }
        if let Some(n) = self.max_edge_shift {
            ws.max_edge_shift = n;
        }
        ws.max_node_total = self.max_node_total.or(ws.max_node_total);
        ws.max_shift_total = self.max_shift_total.or(ws.max_shift_total);
        if let Some(l) = self.lmax {
            ws.lmax = l;
        }
        if let Some(k) = self.kinds {
            ws.kinds = k;
        }
        if self.float == Some(true) {
            ws.mode = CoefficientMode::Float;
        }
        ws.validate()?;
        Ok(ws)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win_over_file() {
        let file = Settings::parse_config("# pinned\ndim = 3\nmax_edges = 5 # trailing\nlmax=2\nmode = float\n").unwrap();
        let flags = Settings { max_edges: Some(2), ..Default::default() };
        let s = flags.over(file);
        assert_eq!(s.dim, Some(3));
        assert_eq!(s.max_edges, Some(2));
        let ws = s.workspace().unwrap();
        assert_eq!((ws.dim, ws.max_edges, ws.lmax, ws.mode), (3, 2, 2, CoefficientMode::Float));
    }

    #[test]
    fn bad_lines_are_rejected() {
        assert!(Settings::parse_config("dim 3").is_err());
        assert!(Settings::parse_config("colour = red").is_err());
        assert!(Settings::parse_config("dim = two").is_err());
        let s = Settings { dim: Some(2), scaling: Some("(2,1,1)".into()), ..Default::default() };
        assert!(s.workspace().is_err());
    }
}
