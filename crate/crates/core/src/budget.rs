//! Enumeration caps shared by every exhaustive routine.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper limits on the size of exhaustive enumerations.
///
/// Parsed from a comma separated `key=value` list, e.g.
/// `brute-sites=12,polycube-d3=9`. Unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Sites in a brute-force `3^N` configuration sum.
    pub brute_sites: usize,
    /// Cells in one polymer for connected-graph sums.
    pub polymer_sites: usize,
    /// Adjacency edges in one polymer (the graph sum walks `2^edges` subsets).
    pub polymer_edges: usize,
    /// Sites of the volume in the grand partition function.
    pub grand_sites: usize,
    /// Vertices for labeled tree enumeration.
    pub tree_vertices: usize,
    /// Vertices for exact lattice embedding counts.
    pub embed_vertices: usize,
    /// Largest `n` for the exhaustive multinomial sum.
    pub multinomial_n: usize,
    /// Largest dimension for the exhaustive multinomial sum.
    pub multinomial_d: usize,
    /// Polycube size cap in `d = 1`.
    pub polycube_d1: usize,
    /// Polycube size cap in `d = 2`.
    pub polycube_d2: usize,
    /// Polycube size cap in `d = 3`.
    pub polycube_d3: usize,
    /// Polycube size cap for `d >= 4`.
    pub polycube_high: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            brute_sites: 16,
            polymer_sites: 9,
            polymer_edges: 20,
            grand_sites: 9,
            tree_vertices: 9,
            embed_vertices: 8,
            multinomial_n: 8,
            multinomial_d: 3,
            polycube_d1: 4096,
            polycube_d2: 12,
            polycube_d3: 8,
            polycube_high: 6,
        }
    }
}

impl Budget {
    pub fn polycube_cap(&self, d: usize) -> usize {
        match d {
            1 => self.polycube_d1,
            2 => self.polycube_d2,
            3 => self.polycube_d3,
            _ => self.polycube_high,
        }
    }

    fn slot(&mut self, key: &str) -> Option<&mut usize> {
        Some(match key {
            "brute-sites" => &mut self.brute_sites,
            "polymer-sites" => &mut self.polymer_sites,
            "polymer-edges" => &mut self.polymer_edges,
            "grand-sites" => &mut self.grand_sites,
            "tree-vertices" => &mut self.tree_vertices,
            "embed-vertices" => &mut self.embed_vertices,
            "multinomial-n" => &mut self.multinomial_n,
            "multinomial-d" => &mut self.multinomial_d,
            "polycube-d1" => &mut self.polycube_d1,
            "polycube-d2" => &mut self.polycube_d2,
            "polycube-d3" => &mut self.polycube_d3,
            "polycube-high" => &mut self.polycube_high,
            _ => return None,
        })
    }

    /// Apply `key=value` overrides on top of `self`.
    pub fn with_overrides(mut self, spec: &str) -> Result<Self> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("budget entry `{item}` is not key=value")))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("budget value `{value}` is not a count")))?;
            let key = key.trim();
            *self
                .slot(key)
                .ok_or_else(|| Error::Parse(format!("unknown budget key `{key}`")))? = value;
        }
        Ok(self)
    }
}

impl FromStr for Budget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Budget::default().with_overrides(s)
    }
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "brute-sites={},polymer-sites={},polymer-edges={},grand-sites={},tree-vertices={},\
             embed-vertices={},multinomial-n={},multinomial-d={},polycube-d1={},polycube-d2={},\
             polycube-d3={},polycube-high={}",
            self.brute_sites,
            self.polymer_sites,
            self.polymer_edges,
            self.grand_sites,
            self.tree_vertices,
            self.embed_vertices,
            self.multinomial_n,
            self.multinomial_d,
            self.polycube_d1,
            self.polycube_d2,
            self.polycube_d3,
            self.polycube_high
        )
    }
}
