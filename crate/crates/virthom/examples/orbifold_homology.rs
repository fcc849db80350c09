//! Meridional presentations, mod-p homology ranks, singular-graph Betti
//! bounds, and the Golod-Shafarevich infiniteness test.
//!
//! Run with: cargo run --example orbifold_homology

use virthom::orbifold::{
    dp_lower_bound, dp_rank, golod_shafarevich, meridional_presentation, GsVerdict,
    LocalGroup, OrbifoldData, Presentation, SingularEdge, SingularGraph, SingularVertex,
};
use virthom::words::{Alphabet, Word};

fn main() {
    let alphabet = Alphabet::of_size(2).unwrap();
    let word = |s: &str| Word::parse(&alphabet, s).unwrap();

    // A free complement presentation with two meridians of orders 2 and 3.
    let data = OrbifoldData {
        complement: Presentation::new(2, vec![]).unwrap(),
        meridians: vec![(word("a"), 2), (word("b a"), 3)],
        singular_graph: SingularGraph {
            vertices: vec![],
            edges: vec![
                SingularEdge::Circle { circle: true, order: 2 },
                SingularEdge::Circle { circle: true, order: 3 },
            ],
        },
    };
    let pres = meridional_presentation(&data).unwrap();
    println!("meridional presentation relators:");
    for rel in &pres.relators {
        println!("  {}", rel.format(&alphabet));
    }
    for p in [2u64, 3, 5] {
        println!(
            "d_{p} = {} (singular lower bound {})",
            dp_rank(&pres, p).unwrap(),
            dp_lower_bound(&data, p).unwrap(),
        );
    }

    // The singular graph of a vertex with dihedral local group: two
    // order-2 edges and one order-n edge.
    let theta = SingularGraph {
        vertices: vec![
            SingularVertex { local_group: LocalGroup::Dihedral(3) },
            SingularVertex { local_group: LocalGroup::Dihedral(3) },
        ],
        edges: vec![
            SingularEdge::Arc { ends: (0, 1), order: 2 },
            SingularEdge::Arc { ends: (0, 1), order: 2 },
            SingularEdge::Arc { ends: (0, 1), order: 3 },
        ],
    };
    println!(
        "\ntheta singular graph: b1 = {}, -chi = {}, warnings = {:?}",
        theta.b1(),
        theta.chi_lower_bound(),
        theta.warnings(),
    );
    for p in [2u64, 3] {
        let part = theta.sing_p_extract(p).unwrap();
        println!(
            "order-{p} part: {} edges, {} vertices, b1 = {}",
            part.edges.len(),
            part.vertices.len(),
            part.b1(),
        );
    }

    // The infiniteness threshold: with deficiency matching the rank, the
    // test tips at d = 9.
    println!("\nGolod-Shafarevich with |R| - |X| = d:");
    for d in 7..=10u64 {
        let verdict = golod_shafarevich(d, 0, d);
        println!(
            "  d = {d}: {}",
            match verdict {
                GsVerdict::Infinite => "infinite",
                GsVerdict::Inconclusive => "inconclusive",
            }
        );
    }
}
