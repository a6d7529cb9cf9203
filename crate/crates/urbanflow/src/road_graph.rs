//! The road network as a weighted directed graph.
//!
//! Nodes are intersections with WGS84 coordinates; segments are straight
//! endpoint pairs. A bidirectional segment expands into two arcs, a one-way
//! segment into one, so arc direction encodes driving direction. Arc weights
//! start at exactly 1.0 and are overwritten by the relatedness stage.

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geo::haversine_m;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoadNode {
    pub id: i64,
    pub lon: f64,
    pub lat: f64,
}

/// A road segment as given in the input: undirected carrier of one or two arcs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoadSegment {
    pub id: i64,
    pub from: i64,
    pub to: i64,
    pub oneway: bool,
    pub length_m: Option<f64>,
}

/// One directed arc. `from`/`to` are dense node indices into the graph's
/// node array, not external ids.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub segment_id: i64,
    pub from: u32,
    pub to: u32,
    pub length_m: f64,
    pub weight: f64,
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: i/o error: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: malformed row: {message}")]
    MalformedRow {
        path: String,
        line: u64,
        message: String,
    },
    #[error("edge {segment_id} references unknown node id {node_id}")]
    DanglingEdge { segment_id: i64, node_id: i64 },
    #[error("duplicate node id {id}")]
    DuplicateNodeId { id: i64 },
}

#[derive(Debug, Error)]
#[error("no directed path from {src} to {dst}")]
pub struct Unreachable {
    pub src: i64,
    pub dst: i64,
}

/// What `simplify` removed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SimplifyReport {
    pub self_loops_removed: usize,
    pub duplicate_arcs_merged: usize,
    pub isolated_nodes_removed: usize,
}

#[derive(Debug, Clone)]
pub struct RoadGraph {
    nodes: Vec<RoadNode>,
    id_to_index: HashMap<i64, u32>,
    arcs: Vec<Arc>,
    out_offsets: Vec<u32>,
    out_arcs: Vec<u32>,
    in_offsets: Vec<u32>,
    in_arcs: Vec<u32>,
}

impl RoadGraph {
    /// Validate nodes and segments, expand segments into arcs, and index
    /// adjacency. Missing segment lengths are computed by haversine.
    pub fn from_parts(
        mut nodes: Vec<RoadNode>,
        segments: Vec<RoadSegment>,
    ) -> Result<Self, LoadError> {
        nodes.sort_by_key(|n| n.id);
        let mut id_to_index = HashMap::with_capacity(nodes.len());
        for (i, node) in nodes.iter().enumerate() {
            if id_to_index.insert(node.id, i as u32).is_some() {
                return Err(LoadError::DuplicateNodeId { id: node.id });
            }
        }

        let mut arcs = Vec::with_capacity(segments.len() * 2);
        for seg in &segments {
            let from = *id_to_index
                .get(&seg.from)
                .ok_or(LoadError::DanglingEdge {
                    segment_id: seg.id,
                    node_id: seg.from,
                })?;
            let to = *id_to_index.get(&seg.to).ok_or(LoadError::DanglingEdge {
                segment_id: seg.id,
                node_id: seg.to,
            })?;
            let length_m = match seg.length_m {
                Some(len) => len,
                None => {
                    let a = &nodes[from as usize];
                    let b = &nodes[to as usize];
                    haversine_m(a.lon, a.lat, b.lon, b.lat)
                }
            };
            arcs.push(Arc {
                segment_id: seg.id,
                from,
                to,
                length_m,
                weight: 1.0,
            });
            if !seg.oneway {
                arcs.push(Arc {
                    segment_id: seg.id,
                    from: to,
                    to: from,
                    length_m,
                    weight: 1.0,
                });
            }
        }

        Ok(Self::assemble(nodes, id_to_index, arcs))
    }

    fn assemble(nodes: Vec<RoadNode>, id_to_index: HashMap<i64, u32>, mut arcs: Vec<Arc>) -> Self {
        arcs.sort_by_key(|a| (a.from, a.to, a.segment_id));
        let n = nodes.len();

        let mut out_offsets = vec![0u32; n + 1];
        for arc in &arcs {
            out_offsets[arc.from as usize + 1] += 1;
        }
        for i in 0..n {
            out_offsets[i + 1] += out_offsets[i];
        }
        let out_arcs: Vec<u32> = (0..arcs.len() as u32).collect();

        let mut in_counts = vec![0u32; n];
        for arc in &arcs {
            in_counts[arc.to as usize] += 1;
        }
        let mut in_offsets = vec![0u32; n + 1];
        for i in 0..n {
            in_offsets[i + 1] = in_offsets[i] + in_counts[i];
        }
        let mut fill = vec![0u32; n];
        let mut in_arcs = vec![0u32; arcs.len()];
        for (idx, arc) in arcs.iter().enumerate() {
            let v = arc.to as usize;
            in_arcs[(in_offsets[v] + fill[v]) as usize] = idx as u32;
            fill[v] += 1;
        }

        Self {
            nodes,
            id_to_index,
            arcs,
            out_offsets,
            out_arcs,
            in_offsets,
            in_arcs,
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn nodes(&self) -> &[RoadNode] {
        &self.nodes
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn node(&self, index: u32) -> &RoadNode {
        &self.nodes[index as usize]
    }

    pub fn node_index(&self, id: i64) -> Option<u32> {
        self.id_to_index.get(&id).copied()
    }

    pub fn node_id(&self, index: u32) -> i64 {
        self.nodes[index as usize].id
    }

    /// Arcs leaving `node`, ordered by (to, segment_id).
    pub fn out_arcs(&self, node: u32) -> impl Iterator<Item = &Arc> {
        let lo = self.out_offsets[node as usize] as usize;
        let hi = self.out_offsets[node as usize + 1] as usize;
        self.out_arcs[lo..hi].iter().map(|&i| &self.arcs[i as usize])
    }

    /// Arcs entering `node`.
    pub fn in_arcs(&self, node: u32) -> impl Iterator<Item = &Arc> {
        let lo = self.in_offsets[node as usize] as usize;
        let hi = self.in_offsets[node as usize + 1] as usize;
        self.in_arcs[lo..hi].iter().map(|&i| &self.arcs[i as usize])
    }

    pub fn has_arc(&self, from: u32, to: u32) -> bool {
        self.out_arcs(from).any(|a| a.to == to)
    }

    pub fn set_arc_weight(&mut self, arc_index: usize, weight: f64) {
        self.arcs[arc_index].weight = weight;
    }

    /// Remove self-loops, merge exact-duplicate arcs (same from/to) keeping
    /// the minimum length, and drop nodes left with degree zero.
    pub fn simplify(&self) -> (RoadGraph, SimplifyReport) {
        let mut report = SimplifyReport::default();

        let mut kept: Vec<Arc> = Vec::with_capacity(self.arcs.len());
        // Arcs are sorted by (from, to, segment_id); duplicates are adjacent.
        let mut i = 0;
        while i < self.arcs.len() {
            let arc = self.arcs[i];
            if arc.from == arc.to {
                report.self_loops_removed += 1;
                i += 1;
                continue;
            }
            let mut best = arc;
            let mut j = i + 1;
            while j < self.arcs.len()
                && self.arcs[j].from == arc.from
                && self.arcs[j].to == arc.to
            {
                if self.arcs[j].length_m < best.length_m {
                    best = self.arcs[j];
                }
                report.duplicate_arcs_merged += 1;
                j += 1;
            }
            kept.push(best);
            i = j;
        }

        let mut degree = vec![0u32; self.nodes.len()];
        for arc in &kept {
            degree[arc.from as usize] += 1;
            degree[arc.to as usize] += 1;
        }
        let mut nodes = Vec::new();
        let mut remap = vec![u32::MAX; self.nodes.len()];
        for (old, node) in self.nodes.iter().enumerate() {
            if degree[old] > 0 {
                remap[old] = nodes.len() as u32;
                nodes.push(*node);
            } else {
                report.isolated_nodes_removed += 1;
            }
        }
        for arc in &mut kept {
            arc.from = remap[arc.from as usize];
            arc.to = remap[arc.to as usize];
        }
        let id_to_index: HashMap<i64, u32> = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.id, i as u32))
            .collect();

        (Self::assemble(nodes, id_to_index, kept), report)
    }

    /// Subgraph induced by `members` (dense indices of self). Returns the
    /// subgraph plus, for each subgraph node, its index in self.
    pub fn induced_subgraph(&self, members: &[u32]) -> (RoadGraph, Vec<u32>) {
        let mut sorted: Vec<u32> = members.to_vec();
        sorted.sort_unstable();
        let mut remap: HashMap<u32, u32> = HashMap::with_capacity(sorted.len());
        let mut nodes = Vec::with_capacity(sorted.len());
        for (new, &old) in sorted.iter().enumerate() {
            remap.insert(old, new as u32);
            nodes.push(self.nodes[old as usize]);
        }
        let mut arcs = Vec::new();
        for arc in &self.arcs {
            if let (Some(&f), Some(&t)) = (remap.get(&arc.from), remap.get(&arc.to)) {
                arcs.push(Arc {
                    from: f,
                    to: t,
                    ..*arc
                });
            }
        }
        let id_to_index: HashMap<i64, u32> = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.id, i as u32))
            .collect();
        (Self::assemble(nodes, id_to_index, arcs), sorted)
    }

    /// Single-source shortest-path lengths by `length_m`. Unreachable nodes
    /// get `f64::INFINITY`.
    pub fn dijkstra_lengths(&self, src: u32) -> Vec<f64> {
        let mut dist = vec![f64::INFINITY; self.nodes.len()];
        dist[src as usize] = 0.0;
        let mut heap = std::collections::BinaryHeap::new();
        heap.push(HeapEntry {
            dist: 0.0,
            node: src,
        });
        while let Some(HeapEntry { dist: d, node }) = heap.pop() {
            if d > dist[node as usize] {
                continue;
            }
            for arc in self.out_arcs(node) {
                let nd = d + arc.length_m;
                if nd < dist[arc.to as usize] {
                    dist[arc.to as usize] = nd;
                    heap.push(HeapEntry {
                        dist: nd,
                        node: arc.to,
                    });
                }
            }
        }
        dist
    }

    fn dijkstra_lengths_reverse(&self, dst: u32) -> Vec<f64> {
        let mut dist = vec![f64::INFINITY; self.nodes.len()];
        dist[dst as usize] = 0.0;
        let mut heap = std::collections::BinaryHeap::new();
        heap.push(HeapEntry {
            dist: 0.0,
            node: dst,
        });
        while let Some(HeapEntry { dist: d, node }) = heap.pop() {
            if d > dist[node as usize] {
                continue;
            }
            for arc in self.in_arcs(node) {
                let nd = d + arc.length_m;
                if nd < dist[arc.from as usize] {
                    dist[arc.from as usize] = nd;
                    heap.push(HeapEntry {
                        dist: nd,
                        node: arc.from,
                    });
                }
            }
        }
        dist
    }

    /// Minimal-length directed path between dense indices. Among equal-length
    /// paths, returns the lexicographically smallest node-index sequence.
    pub fn shortest_path_indices(&self, src: u32, dst: u32) -> Option<Vec<u32>> {
        if src == dst {
            return Some(vec![src]);
        }
        let forward = self.dijkstra_lengths(src);
        let total = forward[dst as usize];
        if !total.is_finite() {
            return None;
        }
        let backward = self.dijkstra_lengths_reverse(dst);
        // Walk the shortest-path DAG greedily, picking the smallest next
        // index; node indices are ordered by id, so this is the
        // lexicographically smallest id sequence.
        let eps = 1e-9 * total.max(1.0);
        let mut path = vec![src];
        let mut cur = src;
        while cur != dst {
            let mut next: Option<u32> = None;
            for arc in self.out_arcs(cur) {
                if arc.to == cur {
                    continue;
                }
                let through = forward[cur as usize] + arc.length_m + backward[arc.to as usize];
                if (through - total).abs() <= eps && next.is_none_or(|n| arc.to < n) {
                    next = Some(arc.to);
                }
            }
            cur = next?;
            path.push(cur);
        }
        Some(path)
    }

    /// Minimal-length directed path between external node ids.
    pub fn shortest_path(&self, src: i64, dst: i64) -> Result<Vec<i64>, Unreachable> {
        let s = self.node_index(src).ok_or(Unreachable { src, dst })?;
        let d = self.node_index(dst).ok_or(Unreachable { src, dst })?;
        match self.shortest_path_indices(s, d) {
            Some(path) => Ok(path.into_iter().map(|i| self.node_id(i)).collect()),
            None => Err(Unreachable { src, dst }),
        }
    }

    /// Bounding box (min_lon, min_lat, max_lon, max_lat) over all nodes.
    pub fn bounding_box(&self) -> Option<(f64, f64, f64, f64)> {
        if self.nodes.is_empty() {
            return None;
        }
        let mut bb = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for n in &self.nodes {
            bb.0 = bb.0.min(n.lon);
            bb.1 = bb.1.min(n.lat);
            bb.2 = bb.2.max(n.lon);
            bb.3 = bb.3.max(n.lat);
        }
        Some(bb)
    }

    pub fn mean_arc_weight(&self) -> f64 {
        if self.arcs.is_empty() {
            return 0.0;
        }
        self.arcs.iter().map(|a| a.weight).sum::<f64>() / self.arcs.len() as f64
    }
}

#[derive(PartialEq)]
struct HeapEntry {
    dist: f64,
    node: u32,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Min-heap on (dist, node); node in the key keeps pops deterministic.
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Deserialize)]
struct NodeRow {
    id: i64,
    lon: f64,
    lat: f64,
}

#[derive(Deserialize)]
struct EdgeRow {
    id: i64,
    from: i64,
    to: i64,
    oneway: u8,
    #[serde(default)]
    length_m: Option<f64>,
}

/// Load a graph from the two CSV schemas: nodes `id,lon,lat` and edges
/// `id,from,to,oneway[,length_m]` with `oneway` in {0,1}.
pub fn load_road_network(
    nodes_path: impl AsRef<Path>,
    edges_path: impl AsRef<Path>,
) -> Result<RoadGraph, LoadError> {
    let nodes = read_nodes_csv(nodes_path.as_ref())?;
    let segments = read_edges_csv(edges_path.as_ref())?;
    RoadGraph::from_parts(nodes, segments)
}

fn io_err(path: &Path, source: std::io::Error) -> LoadError {
    LoadError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn row_err(path: &Path, line: u64, message: impl Into<String>) -> LoadError {
    LoadError::MalformedRow {
        path: path.display().to_string(),
        line,
        message: message.into(),
    }
}

fn csv_line(reader: &csv::Reader<std::fs::File>) -> u64 {
    reader.position().line()
}

fn read_nodes_csv(path: &Path) -> Result<Vec<RoadNode>, LoadError> {
    let file = std::fs::File::open(path).map_err(|e| io_err(path, e))?;
    let mut reader = csv::Reader::from_reader(file);
    let mut nodes = Vec::new();
    let mut records = reader.deserialize::<NodeRow>();
    loop {
        let line = csv_line(records.reader());
        match records.next() {
            None => break,
            Some(Err(e)) => return Err(row_err(path, line, e.to_string())),
            Some(Ok(row)) => {
                if !(-180.0..=180.0).contains(&row.lon) {
                    return Err(row_err(path, line, format!("lon {} out of range", row.lon)));
                }
                if !(-90.0..=90.0).contains(&row.lat) {
                    return Err(row_err(path, line, format!("lat {} out of range", row.lat)));
                }
                nodes.push(RoadNode {
                    id: row.id,
                    lon: row.lon,
                    lat: row.lat,
                });
            }
        }
    }
    Ok(nodes)
}

fn read_edges_csv(path: &Path) -> Result<Vec<RoadSegment>, LoadError> {
    let file = std::fs::File::open(path).map_err(|e| io_err(path, e))?;
    let mut reader = csv::Reader::from_reader(file);
    let mut segments = Vec::new();
    let mut records = reader.deserialize::<EdgeRow>();
    loop {
        let line = csv_line(records.reader());
        match records.next() {
            None => break,
            Some(Err(e)) => return Err(row_err(path, line, e.to_string())),
            Some(Ok(row)) => {
                let oneway = match row.oneway {
                    0 => false,
                    1 => true,
                    other => {
                        return Err(row_err(path, line, format!("oneway must be 0 or 1, got {other}")))
                    }
                };
                if let Some(len) = row.length_m {
                    if !(len > 0.0) {
                        return Err(row_err(path, line, format!("length_m must be > 0, got {len}")));
                    }
                }
                segments.push(RoadSegment {
                    id: row.id,
                    from: row.from,
                    to: row.to,
                    oneway,
                    length_m: row.length_m,
                });
            }
        }
    }
    Ok(segments)
}

/// Write the graph back out in the load schema. Segments are reconstructed
/// from arcs: a pair of arcs sharing a segment id becomes one bidirectional
/// row, a lone arc a one-way row.
pub fn export_csv(
    graph: &RoadGraph,
    nodes_path: impl AsRef<Path>,
    edges_path: impl AsRef<Path>,
) -> std::io::Result<()> {
    let mut nodes_out = std::io::BufWriter::new(std::fs::File::create(nodes_path)?);
    writeln!(nodes_out, "id,lon,lat")?;
    for n in graph.nodes() {
        writeln!(nodes_out, "{},{},{}", n.id, n.lon, n.lat)?;
    }
    nodes_out.flush()?;

    let mut rows: Vec<(i64, i64, i64, u8, f64)> = Vec::new();
    let mut by_segment: HashMap<i64, Vec<&Arc>> = HashMap::new();
    for arc in graph.arcs() {
        by_segment.entry(arc.segment_id).or_default().push(arc);
    }
    for (seg_id, arcs) in &by_segment {
        match arcs.as_slice() {
            [a] => rows.push((*seg_id, graph.node_id(a.from), graph.node_id(a.to), 1, a.length_m)),
            [a, b] if a.from == b.to && a.to == b.from => {
                rows.push((*seg_id, graph.node_id(a.from), graph.node_id(a.to), 0, a.length_m))
            }
            // A segment id carrying anything else (e.g. after dedup kept
            // only one direction of several) round-trips as one-way rows.
            arcs => {
                for a in arcs {
                    rows.push((*seg_id, graph.node_id(a.from), graph.node_id(a.to), 1, a.length_m))
                }
            }
        }
    }
    rows.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut edges_out = std::io::BufWriter::new(std::fs::File::create(edges_path)?);
    writeln!(edges_out, "id,from,to,oneway,length_m")?;
    for (id, from, to, oneway, length) in rows {
        writeln!(edges_out, "{id},{from},{to},{oneway},{length}")?;
    }
    edges_out.flush()
}

/// Optional GeoJSON export: one LineString feature per segment row.
pub fn export_geojson(graph: &RoadGraph, path: impl AsRef<Path>) -> std::io::Result<()> {
    let mut features = Vec::new();
    for arc in graph.arcs() {
        let a = graph.node(arc.from);
        let b = graph.node(arc.to);
        if a.id > b.id && graph.has_arc(arc.to, arc.from) {
            continue; // reverse twin already emitted
        }
        features.push(serde_json::json!({
            "type": "Feature",
            "properties": {"segment_id": arc.segment_id, "length_m": arc.length_m, "weight": arc.weight},
            "geometry": {
                "type": "LineString",
                "coordinates": [[a.lon, a.lat], [b.lon, b.lat]],
            },
        }));
    }
    let doc = serde_json::json!({"type": "FeatureCollection", "features": features});
    std::fs::write(path, serde_json::to_string_pretty(&doc)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn node(id: i64, lon: f64, lat: f64) -> RoadNode {
        RoadNode { id, lon, lat }
    }

    pub(crate) fn seg(id: i64, from: i64, to: i64, oneway: bool, length_m: f64) -> RoadSegment {
        RoadSegment {
            id,
            from,
            to,
            oneway,
            length_m: Some(length_m),
        }
    }

    fn line_graph(n: i64) -> RoadGraph {
        let nodes = (1..=n).map(|i| node(i, i as f64 * 0.001, 0.0)).collect();
        let segments = (1..n).map(|i| seg(i, i, i + 1, false, 100.0)).collect();
        RoadGraph::from_parts(nodes, segments).unwrap()
    }

    #[test]
    fn bidirectional_segment_expands_to_two_arcs() {
        let g = RoadGraph::from_parts(
            vec![node(1, 0.0, 0.0), node(2, 0.001, 0.0)],
            vec![seg(10, 1, 2, false, 100.0)],
        )
        .unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.arc_count(), 2);
    }

    #[test]
    fn arc_count_formula() {
        // 1->2 oneway, 2->3 bidirectional: 1 + 2 arcs.
        let g = RoadGraph::from_parts(
            vec![node(1, 0.0, 0.0), node(2, 0.001, 0.0), node(3, 0.002, 0.0)],
            vec![seg(1, 1, 2, true, 100.0), seg(2, 2, 3, false, 100.0)],
        )
        .unwrap();
        assert_eq!(g.arc_count(), 3);
    }

    #[test]
    fn dangling_edge_rejected() {
        let err = RoadGraph::from_parts(
            vec![node(1, 0.0, 0.0), node(2, 0.001, 0.0)],
            vec![seg(1, 1, 99, true, 100.0)],
        )
        .unwrap_err();
        match err {
            LoadError::DanglingEdge { node_id, .. } => assert_eq!(node_id, 99),
            other => panic!("expected DanglingEdge, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_node_id_rejected() {
        let err =
            RoadGraph::from_parts(vec![node(1, 0.0, 0.0), node(1, 0.001, 0.0)], vec![]).unwrap_err();
        assert!(matches!(err, LoadError::DuplicateNodeId { id: 1 }));
    }

    #[test]
    fn missing_length_computed_by_haversine() {
        let g = RoadGraph::from_parts(
            vec![node(1, 0.0, 0.0), node(2, 0.0, 1.0)],
            vec![RoadSegment {
                id: 1,
                from: 1,
                to: 2,
                oneway: true,
                length_m: None,
            }],
        )
        .unwrap();
        let len = g.arcs()[0].length_m;
        assert!((len - 111_194.9).abs() < 10.0, "got {len}");
    }

    #[test]
    fn simplify_removes_self_loops_duplicates_and_isolated_nodes() {
        let g = RoadGraph::from_parts(
            vec![
                node(1, 0.0, 0.0),
                node(2, 0.001, 0.0),
                node(7, 0.5, 0.5), // isolated
            ],
            vec![
                seg(1, 1, 1, true, 5.0),  // self loop
                seg(2, 1, 2, true, 12.0), // duplicate pair, keep min
                seg(3, 1, 2, true, 10.0),
            ],
        )
        .unwrap();
        let (s, report) = g.simplify();
        assert_eq!(report.self_loops_removed, 1);
        assert_eq!(report.duplicate_arcs_merged, 1);
        assert_eq!(report.isolated_nodes_removed, 1);
        assert_eq!(s.node_count(), 2);
        assert_eq!(s.arc_count(), 1);
        assert_eq!(s.arcs()[0].length_m, 10.0);
        assert!(s.node_index(7).is_none());
    }

    #[test]
    fn shortest_path_identity() {
        let g = line_graph(3);
        assert_eq!(g.shortest_path(2, 2).unwrap(), vec![2]);
    }

    #[test]
    fn shortest_path_on_line() {
        let g = line_graph(3);
        assert_eq!(g.shortest_path(1, 3).unwrap(), vec![1, 2, 3]);
    }

    #[test]
    fn shortest_path_tie_breaks_lexicographically() {
        // Two equal-length routes 1->2->4 and 1->3->4.
        let g = RoadGraph::from_parts(
            vec![
                node(1, 0.0, 0.0),
                node(2, 0.001, 0.001),
                node(3, 0.001, -0.001),
                node(4, 0.002, 0.0),
            ],
            vec![
                seg(1, 1, 2, true, 100.0),
                seg(2, 2, 4, true, 100.0),
                seg(3, 1, 3, true, 100.0),
                seg(4, 3, 4, true, 100.0),
            ],
        )
        .unwrap();
        // Oracle: enumerate all simple paths and apply the (length, lexicographic) rule.
        let oracle = brute_force_best_path(&g, 1, 4).unwrap();
        let got = g.shortest_path(1, 4).unwrap();
        assert_eq!(got, oracle);
        assert_eq!(got, vec![1, 2, 4]);
    }

    #[test]
    fn unreachable_reported() {
        let g = RoadGraph::from_parts(
            vec![node(1, 0.0, 0.0), node(2, 0.001, 0.0)],
            vec![seg(1, 1, 2, true, 100.0)],
        )
        .unwrap();
        assert!(g.shortest_path(2, 1).is_err());
    }

    /// Exhaustive simple-path enumeration; independent oracle for Dijkstra
    /// and the tie rule on small graphs.
    pub(crate) fn brute_force_best_path(g: &RoadGraph, src: i64, dst: i64) -> Option<Vec<i64>> {
        fn recurse(
            g: &RoadGraph,
            cur: u32,
            dst: u32,
            path: &mut Vec<u32>,
            length: f64,
            best: &mut Option<(f64, Vec<u32>)>,
        ) {
            if cur == dst {
                let candidate = (length, path.clone());
                let replace = match best {
                    None => true,
                    Some((bl, bp)) => {
                        length < *bl - 1e-9 || ((length - *bl).abs() <= 1e-9 && path < bp)
                    }
                };
                if replace {
                    *best = Some(candidate);
                }
                return;
            }
            for arc in g.out_arcs(cur) {
                if path.contains(&arc.to) {
                    continue;
                }
                path.push(arc.to);
                recurse(g, arc.to, dst, path, length + arc.length_m, best);
                path.pop();
            }
        }
        let s = g.node_index(src)?;
        let d = g.node_index(dst)?;
        let mut best = None;
        recurse(g, s, d, &mut vec![s], 0.0, &mut best);
        best.map(|(_, p)| p.into_iter().map(|i| g.node_id(i)).collect())
    }

    #[test]
    fn dijkstra_matches_exhaustive_enumeration_on_random_small_graphs() {
        use rand::Rng;
        let mut rng = crate::rng::stream(3, "dijkstra-oracle");
        for case in 0..40 {
            let n = rng.random_range(2..=8);
            let nodes: Vec<RoadNode> =
                (1..=n).map(|i| node(i, i as f64 * 0.001, 0.0)).collect();
            let mut segments = Vec::new();
            let mut seg_id = 0;
            for a in 1..=n {
                for b in 1..=n {
                    if a != b && rng.random::<f64>() < 0.35 {
                        seg_id += 1;
                        segments.push(seg(seg_id, a, b, true, rng.random_range(1.0..100.0)));
                    }
                }
            }
            let g = RoadGraph::from_parts(nodes, segments).unwrap();
            let src = rng.random_range(1..=n);
            let dst = rng.random_range(1..=n);
            let oracle = brute_force_best_path(&g, src, dst);
            let got = g.shortest_path(src, dst).ok();
            assert_eq!(got, oracle, "case {case}: src {src} dst {dst}");
        }
    }

    #[test]
    fn adjacency_consistency() {
        let g = line_graph(5);
        for (idx, arc) in g.arcs().iter().enumerate() {
            assert!(g.out_arcs(arc.from).any(|a| std::ptr::eq(a, &g.arcs()[idx])));
            assert!(g.in_arcs(arc.to).any(|a| std::ptr::eq(a, &g.arcs()[idx])));
        }
        let out_total: usize = (0..g.node_count() as u32).map(|v| g.out_arcs(v).count()).sum();
        let in_total: usize = (0..g.node_count() as u32).map(|v| g.in_arcs(v).count()).sum();
        assert_eq!(out_total, g.arc_count());
        assert_eq!(in_total, g.arc_count());
    }

    #[test]
    fn csv_round_trip_preserves_node_and_arc_sets() {
        let dir = tempfile::tempdir().unwrap();
        let g = RoadGraph::from_parts(
            vec![node(1, 0.0, 0.0), node(2, 0.001, 0.0), node(3, 0.002, 0.0)],
            vec![seg(1, 1, 2, true, 101.5), seg(2, 2, 3, false, 99.25)],
        )
        .unwrap();
        let nodes_path = dir.path().join("nodes.csv");
        let edges_path = dir.path().join("edges.csv");
        export_csv(&g, &nodes_path, &edges_path).unwrap();
        let reloaded = load_road_network(&nodes_path, &edges_path).unwrap();
        assert_eq!(reloaded.nodes(), g.nodes());
        let arcset =
            |g: &RoadGraph| -> std::collections::BTreeSet<(i64, i64, i64)> {
                g.arcs()
                    .iter()
                    .map(|a| (a.segment_id, g.node_id(a.from), g.node_id(a.to)))
                    .collect()
            };
        assert_eq!(arcset(&reloaded), arcset(&g));
    }

    #[test]
    fn malformed_csv_reports_line_number() {
        let dir = tempfile::tempdir().unwrap();
        let nodes_path = dir.path().join("nodes.csv");
        std::fs::write(&nodes_path, "id,lon,lat\n1,0.0,0.0\n2,not_a_number,0.0\n").unwrap();
        let edges_path = dir.path().join("edges.csv");
        std::fs::write(&edges_path, "id,from,to,oneway\n").unwrap();
        let err = load_road_network(&nodes_path, &edges_path).unwrap_err();
        match err {
            LoadError::MalformedRow { line, .. } => assert_eq!(line, 3),
            other => panic!("expected MalformedRow, got {other:?}"),
        }
    }
}
