//! Graph Cheeger constants (exact and spectral-sweep) and the Laplacian
//! bottom-of-spectrum scalar from a limit-set dimension.
//!
//! Run with: cargo run --example cheeger_bounds

use virthom::models::sullivan_lambda0;
use virthom::surfaces::{cheeger_exact, cheeger_sweep, SkeletonGraph, Triangulation};

fn main() {
    let k4 = SkeletonGraph::complete(4);
    let c6 = SkeletonGraph::cycle(6);
    println!(
        "h(K4): exact = {}, sweep = {}",
        cheeger_exact(&k4, 20).unwrap(),
        cheeger_sweep(&k4).unwrap(),
    );
    println!(
        "h(C6): exact = {}, sweep = {}",
        cheeger_exact(&c6, 20).unwrap(),
        cheeger_sweep(&c6).unwrap(),
    );

    // Cheeger constant of a triangulation 1-skeleton.
    let tri = Triangulation::doubled_chain(4);
    let skel = tri.one_skeleton();
    println!(
        "doubled 4-chain skeleton (|V| = {}, |E| = {}): exact = {}, sweep = {}",
        skel.num_vertices(),
        skel.edges().len(),
        cheeger_exact(&skel, 20).unwrap(),
        cheeger_sweep(&skel).unwrap(),
    );

    // The scalar bridge between limit-set dimensions and spectra:
    // lambda_0 = D (2 - D) on [1, 2].
    println!("\nlambda_0 over limit-set dimensions:");
    for d in [1.0, 1.25, 1.5, 1.75, 1.9, 2.0] {
        println!("  D = {d:<5} lambda_0 = {}", sullivan_lambda0(d).unwrap());
    }
}
