//! The JSON instance format.
//!
//! ```json
//! {"kind":"graph","n":3,"edges":[[0,1,1],[0,2,1],[1,2,1]],"chips":[0,0,0]}
//! ```
//!
//! `chips` and `divisor` are optional and must have length `n`. The
//! canonical form merges parallel entries, lists graph edges with the
//! smaller endpoint first, sorts edges lexicographically and is written
//! without whitespace.

use chipfire_core::{ChipDistribution, Digraph, Divisor, Graph};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Graph,
    Digraph,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance {
    pub kind: Kind,
    pub n: usize,
    pub edges: Vec<(usize, usize, i64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chips: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divisor: Option<Vec<i64>>,
}

/// A validated instance.
#[derive(Debug, Clone)]
pub enum Host {
    Graph(Graph),
    Digraph(Digraph),
}

impl Instance {
    pub fn parse(text: &str) -> Result<Self> {
        let instance: Instance = serde_json::from_str(text)?;
        instance.host()?;
        instance.check_lengths()?;
        Ok(instance)
    }

    pub fn from_graph(g: &Graph) -> Self {
        Instance { kind: Kind::Graph, n: g.vertex_count(), edges: g.edges().to_vec(), chips: None, divisor: None }
    }

    pub fn from_digraph(d: &Digraph) -> Self {
        Instance { kind: Kind::Digraph, n: d.vertex_count(), edges: d.arcs().to_vec(), chips: None, divisor: None }
    }

    pub fn with_chips(mut self, chips: Vec<i64>) -> Self {
        self.chips = Some(chips);
        self
    }

    pub fn with_divisor(mut self, divisor: Vec<i64>) -> Self {
        self.divisor = Some(divisor);
        self
    }

    fn check_lengths(&self) -> Result<()> {
        for (name, values) in [("chips", &self.chips), ("divisor", &self.divisor)] {
            if let Some(v) = values {
                if v.len() != self.n {
                    return Err(CliError::Parse(format!("{name} has length {}, expected {}", v.len(), self.n)));
                }
            }
        }
        Ok(())
    }

    pub fn host(&self) -> Result<Host> {
        let host = match self.kind {
            Kind::Graph => Host::Graph(Graph::new(self.n, &self.edges).map_err(|e| CliError::Parse(e.to_string()))?),
            Kind::Digraph => {
                Host::Digraph(Digraph::new(self.n, &self.edges).map_err(|e| CliError::Parse(e.to_string()))?)
            }
        };
        Ok(host)
    }

    pub fn graph(&self) -> Result<Graph> {
        match self.host()? {
            Host::Graph(g) => Ok(g),
            Host::Digraph(_) => Err(CliError::Usage("this command needs an undirected graph instance".into())),
        }
    }

    pub fn digraph(&self) -> Result<Digraph> {
        match self.host()? {
            Host::Digraph(d) => Ok(d),
            Host::Graph(_) => Err(CliError::Usage("this command needs a digraph instance".into())),
        }
    }

    pub fn chips(&self) -> Result<ChipDistribution> {
        let chips = self.chips.clone().ok_or_else(|| CliError::Usage("instance has no \"chips\" array".into()))?;
        Ok(ChipDistribution::new(chips)?)
    }

    /// The chips array, or all zeros when absent.
    pub fn chips_or_zero(&self) -> Result<ChipDistribution> {
        match self.chips {
            Some(_) => self.chips(),
            None => Ok(ChipDistribution::zero(self.n)),
        }
    }

    pub fn divisor(&self) -> Result<Divisor> {
        self.divisor
            .clone()
            .map(Divisor::new)
            .ok_or_else(|| CliError::Usage("instance has no \"divisor\" array".into()))
    }

    /// Rebuilds the edge list from the validated host.
    pub fn canonical(&self) -> Result<Self> {
        let mut out = match self.host()? {
            Host::Graph(g) => Instance::from_graph(&g),
            Host::Digraph(d) => Instance::from_digraph(&d),
        };
        out.chips = self.chips.clone();
        out.divisor = self.divisor.clone();
        Ok(out)
    }

    pub fn to_canonical_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.canonical()?)?)
    }
}
