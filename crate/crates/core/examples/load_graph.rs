//! Loads an edge list (argument or a built-in sample), keeps the largest
//! connected component and prints what was dropped.
//!
//! cargo run --example load_graph -- edges.txt

use std::fs::File;
use std::io::{BufReader, Cursor};

use ellembed::load_edge_list;

const SAMPLE: &str = "# two triangles, a bridge, a loop, a duplicate and a stray edge
a b
b c
a c
d e
e f
d f
a d
a a
b a
x y
";

fn main() -> ellembed::Result<()> {
    let (graph, report) = match std::env::args().nth(1) {
        Some(path) => load_edge_list(BufReader::new(File::open(path)?))?,
        None => load_edge_list(Cursor::new(SAMPLE))?,
    };
    println!("nodes {}, edges {}, volume {}", graph.node_count(), graph.edge_count(), graph.volume());
    println!(
        "dropped: {} self-loops, {} duplicates, {} nodes and {} edges outside the largest component",
        report.self_loops, report.duplicate_edges, report.dropped_nodes, report.dropped_edges
    );
    for i in 0..graph.node_count() {
        let neighbors: Vec<&str> = graph.neighbors(i).iter().map(|&j| graph.label(j)).collect();
        println!("{} -> {}", graph.label(i), neighbors.join(" "));
    }
    println!("sha256 {}", graph.content_hash());
    Ok(())
}
