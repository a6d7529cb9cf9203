//! Urban spatial structure from taxi trajectories and a road network.
//!
//! The pipeline turns raw GPS streams into a relatedness-weighted directed
//! road graph and partitions it into a multi-level hierarchy of
//! spatial-interaction communities:
//!
//! 1. [`road_graph`] loads the street network as a weighted directed graph.
//! 2. [`trajectory_ingest`] segments GPS streams into passenger-carrying
//!    trips and snaps them to road nodes, producing a corpus of node
//!    sequences.
//! 3. [`node_embedding`] trains skip-gram embeddings of road nodes on that
//!    corpus.
//! 4. [`relatedness`] assigns cosine-similarity weights to every arc.
//! 5. [`community_detect`] minimizes the map equation over random-walk flows
//!    to produce a hierarchical partition.
//! 6. [`evaluation`] scores partitions: intra-flow fractions, mixed-use
//!    indices, TF-IDF labels, and origin-destination flow matrices.
//!
//! [`synth_city`] generates planted-partition test cities so the whole chain
//! can be validated without proprietary taxi data.

pub mod community_detect;
pub mod evaluation;
pub mod geo;
pub mod node_embedding;
pub mod relatedness;
pub mod road_graph;
pub mod rng;
pub mod synth_city;
pub mod trajectory_ingest;

mod parallel;
mod spatial;
