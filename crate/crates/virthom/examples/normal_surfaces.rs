//! Normal surfaces from vertex sets: parity, the seven curve types, cell
//! counts and the count-bound constants.
//!
//! Run with: cargo run --example normal_surfaces

use virthom::surfaces::{
    boundary_set, build_surface, claim_bounds_eval, claim_constants,
    enumerate_normal_curve_types, face_parity_check, Triangulation, VertexSet,
};

fn main() {
    println!("normal curve catalogue:");
    for t in enumerate_normal_curve_types() {
        println!("  {t:?}");
    }

    let tri = Triangulation::four_simplex_boundary();
    println!(
        "\nboundary of the 4-simplex: {} tetrahedra, {} vertices, {} edges, {} faces, chi = {}",
        tri.num_tetrahedra(),
        tri.num_vertex_classes(),
        tri.num_edge_classes(),
        tri.num_face_classes(),
        tri.euler_characteristic(),
    );
    let skel = tri.one_skeleton();
    println!("skeleton valences: {:?}", skel.valences());

    let constants = claim_constants(&tri);
    println!(
        "count-bound constants: k0 = {}, k1 = {}, k2 = {}",
        constants.k0, constants.k1, constants.k2
    );

    for a_vertices in [vec![0usize], vec![0, 1], vec![0, 2, 4]] {
        let a = VertexSet::new(a_vertices.clone(), skel.num_vertices()).unwrap();
        let parity = face_parity_check(&tri, &a);
        let surface = build_surface(&tri, &a).unwrap();
        let boundary = boundary_set(&skel, &a).len();
        let report = claim_bounds_eval(surface.counts(), a.len(), boundary, 2, constants);
        println!(
            "\nA = {a_vertices:?}: |dA| = {boundary}, cells = ({}, {}, {}), chi = {}, \
             parity clean = {}, bounds hold = {}",
            surface.counts().zero_cells,
            surface.counts().one_cells,
            surface.counts().two_cells,
            surface.euler_characteristic(),
            parity.is_clean(),
            report.all_bounds_hold(),
        );
        println!(
            "  surface rank upper bound {} | interior rank lower bound {}",
            report.surface_rank_upper, report.interior_rank_lower,
        );
    }
}
