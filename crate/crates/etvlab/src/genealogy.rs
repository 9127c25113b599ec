//! Genealogical graphs over birth records and Event Takeover Value (ETV)
//! computation.
//!
//! Every node keeps at most one dominant-parent edge, so the graph is a
//! forest rooted at generation-1 individuals, uncoupled insertions, and
//! nodes detached by hitchhiking elimination. `etvgen(a, g)` counts the
//! generation-g nodes whose parent chain reaches `a`; the ETV of a node is
//! the maximum of those counts over all later generations within the
//! snapshot horizon, floored at 1.
//!
//! Hitchhiking elimination sweeps generations oldest-first: whenever every
//! living descendant of an ancestor at generation g funnels through the same
//! child, that child's parent edge is cut at g (the ancestor stops accruing,
//! its ETV freezes at the running maximum, and the child becomes a root).
//! All cuts of one generation are decided on the pre-cut paths and applied
//! together before the generation's counts are accrued.

use thiserror::Error;

use crate::ga::{BirthRecord, NodeId};

/// Immutable genealogy of one run. Generations may have different sizes;
/// slots within each generation are contiguous from 1.
#[derive(Clone, Debug)]
pub struct GenealogyGraph {
    gen_sizes: Vec<u32>,
    /// Prefix sums over `gen_sizes`; `offsets[g-1]..offsets[g]` are the flat
    /// node indices of generation g.
    offsets: Vec<usize>,
    parent: Vec<Option<u32>>,
    uncoupled: Vec<bool>,
    clone_flag: Vec<bool>,
    children: Vec<Vec<u32>>,
}

/// A parent edge removed by hitchhiking elimination, effective at `gen`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CutEdge {
    pub parent: NodeId,
    pub child: NodeId,
    pub gen: u32,
}

/// ETV values for every node born up to the snapshot horizon.
#[derive(Clone, Debug)]
pub struct EtvTable {
    horizon: u32,
    gen_sizes: Vec<u32>,
    offsets: Vec<usize>,
    values: Vec<u32>,
}

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("empty record stream")]
    Empty,
    #[error("node {0} appears more than once")]
    DuplicateNode(NodeId),
    #[error("node id {0} has a zero component; generations and slots are 1-based")]
    ZeroIndex(NodeId),
    #[error("generation {gen} has {found} records but slots up to {max_slot}")]
    NonContiguousGeneration { gen: u32, found: u32, max_slot: u32 },
    #[error("node {child} references parent {parent} which does not exist")]
    MissingParent { child: NodeId, parent: NodeId },
    #[error("node {child} has parent {parent} outside the previous generation")]
    ParentWrongGeneration { child: NodeId, parent: NodeId },
    #[error("uncoupled node {0} must not carry a parent edge")]
    UncoupledWithParent(NodeId),
    #[error("coupled node {0} is missing its dominant parent")]
    CoupledWithoutParent(NodeId),
}

/// Build the genealogy from a birth-record stream (any record order).
pub fn build_graph(records: &[BirthRecord]) -> Result<GenealogyGraph, GraphError> {
    if records.is_empty() {
        return Err(GraphError::Empty);
    }
    let mut t = 0u32;
    for r in records {
        if r.id.gen == 0 || r.id.slot == 0 {
            return Err(GraphError::ZeroIndex(r.id));
        }
        t = t.max(r.id.gen);
    }
    let mut max_slot = vec![0u32; t as usize];
    let mut count = vec![0u32; t as usize];
    for r in records {
        let g = (r.id.gen - 1) as usize;
        max_slot[g] = max_slot[g].max(r.id.slot);
        count[g] += 1;
    }
    for g in 0..t as usize {
        if count[g] != max_slot[g] || count[g] == 0 {
            return Err(GraphError::NonContiguousGeneration {
                gen: g as u32 + 1,
                found: count[g],
                max_slot: max_slot[g],
            });
        }
    }
    let gen_sizes = max_slot;
    let mut offsets = Vec::with_capacity(t as usize + 1);
    offsets.push(0usize);
    for &s in &gen_sizes {
        offsets.push(offsets.last().unwrap() + s as usize);
    }
    let node_count = *offsets.last().unwrap();

    let mut graph = GenealogyGraph {
        gen_sizes,
        offsets,
        parent: vec![None; node_count],
        uncoupled: vec![false; node_count],
        clone_flag: vec![false; node_count],
        children: vec![Vec::new(); node_count],
    };
    let mut seen = vec![false; node_count];

    for r in records {
        let idx = graph.index_of(r.id);
        if seen[idx] {
            return Err(GraphError::DuplicateNode(r.id));
        }
        seen[idx] = true;
        graph.uncoupled[idx] = r.uncoupled;
        graph.clone_flag[idx] = r.is_clone;
        match r.dominant_parent {
            Some(p) => {
                if r.uncoupled {
                    return Err(GraphError::UncoupledWithParent(r.id));
                }
                if p.gen + 1 != r.id.gen {
                    return Err(GraphError::ParentWrongGeneration {
                        child: r.id,
                        parent: p,
                    });
                }
                if p.slot == 0 || p.slot > graph.gen_sizes[(p.gen - 1) as usize] {
                    return Err(GraphError::MissingParent {
                        child: r.id,
                        parent: p,
                    });
                }
                let pidx = graph.index_of(p) as u32;
                graph.parent[idx] = Some(pidx);
                graph.children[pidx as usize].push(idx as u32);
            }
            None => {
                if !r.uncoupled {
                    return Err(GraphError::CoupledWithoutParent(r.id));
                }
            }
        }
    }
    for list in &mut graph.children {
        list.sort_unstable();
    }
    Ok(graph)
}

impl GenealogyGraph {
    /// Number of recorded generations.
    pub fn generations(&self) -> u32 {
        self.gen_sizes.len() as u32
    }

    /// Size of the largest generation (the ETV upper bound).
    pub fn max_generation_size(&self) -> u32 {
        self.gen_sizes.iter().copied().max().unwrap_or(0)
    }

    pub fn generation_size(&self, gen: u32) -> u32 {
        self.gen_sizes[(gen - 1) as usize]
    }

    pub fn node_count(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    fn index_of(&self, id: NodeId) -> usize {
        self.offsets[(id.gen - 1) as usize] + (id.slot - 1) as usize
    }

    fn id_of(&self, index: usize) -> NodeId {
        let gen = self.offsets.partition_point(|&o| o <= index);
        NodeId::new(gen as u32, (index - self.offsets[gen - 1] + 1) as u32)
    }

    pub fn parent_of(&self, id: NodeId) -> Option<NodeId> {
        self.parent[self.index_of(id)].map(|p| self.id_of(p as usize))
    }

    pub fn children_of(&self, id: NodeId) -> Vec<NodeId> {
        self.children[self.index_of(id)]
            .iter()
            .map(|&c| self.id_of(c as usize))
            .collect()
    }

    pub fn is_uncoupled(&self, id: NodeId) -> bool {
        self.uncoupled[self.index_of(id)]
    }

    pub fn is_clone(&self, id: NodeId) -> bool {
        self.clone_flag[self.index_of(id)]
    }

    pub fn is_root(&self, id: NodeId) -> bool {
        self.parent[self.index_of(id)].is_none()
    }

    /// Number of generation-`gen` nodes whose parent chain reaches
    /// `ancestor`. Reflects any cuts already applied to the graph.
    pub fn etvgen(&self, ancestor: NodeId, gen: u32) -> u32 {
        assert!(
            gen > ancestor.gen,
            "etvgen is defined for generations after the ancestor's"
        );
        assert!(gen <= self.generations(), "generation beyond the horizon");
        let target = self.index_of(ancestor) as u32;
        let mut count = 0;
        for v in self.offsets[(gen - 1) as usize]..self.offsets[gen as usize] {
            let mut cursor = self.parent[v];
            while let Some(a) = cursor {
                // Flat indices strictly decrease along parent chains.
                if a < target {
                    break;
                }
                if a == target {
                    count += 1;
                    break;
                }
                cursor = self.parent[a as usize];
            }
        }
        count
    }

    /// ETV of every node born up to `horizon`.
    ///
    /// With `detach` on, the hitchhiking-elimination sweep runs on a private
    /// copy of the parent edges; the graph itself is not modified.
    pub fn compute_etv_snapshot(
        &self,
        horizon: u32,
        edge_cap: Option<u32>,
        detach: bool,
    ) -> EtvTable {
        let (mut tables, _) = self.sweep(&[horizon], edge_cap, detach);
        tables.pop().unwrap()
    }

    /// Snapshot several horizons in one forward sweep. Cut decisions at a
    /// generation depend only on earlier generations, so the tables are
    /// prefix-consistent with per-horizon recomputation.
    pub fn compute_etv_snapshots(
        &self,
        horizons: &[u32],
        edge_cap: Option<u32>,
        detach: bool,
    ) -> Vec<EtvTable> {
        let (tables, _) = self.sweep(horizons, edge_cap, detach);
        tables
    }

    /// Apply hitchhiking elimination to the graph itself, generation by
    /// generation up to `upto`. Cut children become uncoupled roots.
    /// Returns the cut edges in discovery order.
    pub fn detach_hitchhikers(&mut self, upto: u32) -> Vec<CutEdge> {
        let (_, cuts) = self.sweep(&[upto], None, true);
        for cut in &cuts {
            let child = self.index_of(cut.child);
            let parent = self.index_of(cut.parent) as u32;
            self.parent[child] = None;
            self.uncoupled[child] = true;
            self.children[parent as usize].retain(|&c| c != child as u32);
        }
        cuts
    }

    fn sweep(
        &self,
        horizons: &[u32],
        edge_cap: Option<u32>,
        detach: bool,
    ) -> (Vec<EtvTable>, Vec<CutEdge>) {
        assert!(!horizons.is_empty(), "need at least one horizon");
        assert!(
            horizons.windows(2).all(|w| w[0] < w[1]),
            "horizons must be strictly increasing"
        );
        let t_max = *horizons.last().unwrap();
        assert!(
            t_max >= 1 && t_max <= self.generations(),
            "horizon beyond the recorded stream"
        );

        let node_count = self.offsets[t_max as usize];
        let mut parent: Vec<Option<u32>> = self.parent[..node_count].to_vec();
        let mut best = vec![0u32; node_count];
        // Generation-stamped scratch arrays avoid clearing between sweeps.
        let mut conduit_stamp = vec![0u32; node_count];
        let mut conduit = vec![0u32; node_count];
        let mut multi = vec![false; node_count];
        let mut count_stamp = vec![0u32; node_count];
        let mut count = vec![0u32; node_count];
        let mut touched: Vec<u32> = Vec::new();
        let mut cuts = Vec::new();
        let mut tables = Vec::new();
        let mut next_horizon = 0usize;

        for g in 1..=t_max {
            if g >= 2 {
                let nodes = self.offsets[(g - 1) as usize]..self.offsets[g as usize];
                if detach {
                    touched.clear();
                    for v in nodes.clone() {
                        let mut below = v as u32;
                        let mut cursor = parent[v];
                        while let Some(a) = cursor {
                            let ai = a as usize;
                            if conduit_stamp[ai] != g {
                                conduit_stamp[ai] = g;
                                conduit[ai] = below;
                                multi[ai] = false;
                                touched.push(a);
                            } else if !multi[ai] && conduit[ai] != below {
                                multi[ai] = true;
                            }
                            below = a;
                            cursor = parent[ai];
                        }
                    }
                    for &a in &touched {
                        let ai = a as usize;
                        if !multi[ai] {
                            let child = conduit[ai];
                            parent[child as usize] = None;
                            cuts.push(CutEdge {
                                parent: self.id_of(ai),
                                child: self.id_of(child as usize),
                                gen: g,
                            });
                        }
                    }
                }
                touched.clear();
                for v in nodes {
                    let mut cursor = parent[v];
                    while let Some(a) = cursor {
                        let ai = a as usize;
                        if count_stamp[ai] != g {
                            count_stamp[ai] = g;
                            count[ai] = 0;
                            touched.push(a);
                        }
                        count[ai] += 1;
                        cursor = parent[ai];
                    }
                }
                for &a in &touched {
                    let ai = a as usize;
                    let capped = edge_cap.map_or(count[ai], |cap| count[ai].min(cap));
                    if capped > best[ai] {
                        best[ai] = capped;
                    }
                }
            }
            if next_horizon < horizons.len() && horizons[next_horizon] == g {
                let upto = self.offsets[g as usize];
                tables.push(EtvTable {
                    horizon: g,
                    gen_sizes: self.gen_sizes[..g as usize].to_vec(),
                    offsets: self.offsets[..=g as usize].to_vec(),
                    values: best[..upto].iter().map(|&b| b.max(1)).collect(),
                });
                next_horizon += 1;
            }
        }
        (tables, cuts)
    }
}

impl EtvTable {
    pub fn horizon(&self) -> u32 {
        self.horizon
    }

    /// Size of the largest generation within the horizon.
    pub fn max_generation_size(&self) -> u32 {
        self.gen_sizes.iter().copied().max().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, id: NodeId) -> u32 {
        self.values[self.offsets[(id.gen - 1) as usize] + (id.slot - 1) as usize]
    }

    pub fn max_value(&self) -> u32 {
        self.values.iter().copied().max().unwrap_or(0)
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, u32)> + '_ {
        let mut gen = 1u32;
        self.values.iter().enumerate().map(move |(idx, &v)| {
            while idx >= self.offsets[gen as usize] {
                gen += 1;
            }
            (
                NodeId::new(gen, (idx - self.offsets[(gen - 1) as usize] + 1) as u32),
                v,
            )
        })
    }

    /// Two-column text table: `i,j` node id and ETV value, one node per line.
    pub fn to_two_column(&self) -> String {
        let mut out = String::with_capacity(self.values.len() * 10);
        for (id, v) in self.iter() {
            out.push_str(&format!("{id} {v}\n"));
        }
        out
    }
}
