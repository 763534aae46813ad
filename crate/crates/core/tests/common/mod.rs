//! Incidence graphs of small finite geometries.
//!
//! Random biregular graphs at these sizes have pairs of vertices sharing two
//! neighbors, which caps their certified expansion with delta below 1/6 at
//! subset size 1. Incidence graphs of projective and affine planes have no
//! such pairs, so they certify subset size 2.

#![allow(dead_code)]

use ssflip::BipartiteGraph;

/// Points of the projective plane over GF(p): nonzero vectors of GF(p)^3
/// whose first nonzero coordinate is 1. Lines use the same coordinates.
fn pg_points(p: u32) -> Vec<[u32; 3]> {
    let mut pts = Vec::new();
    for x in 0..p {
        for y in 0..p {
            for z in 0..p {
                let v = [x, y, z];
                if v.iter().find(|&&c| c != 0) == Some(&1) {
                    pts.push(v);
                }
            }
        }
    }
    pts
}

/// Lines of PG(2,p) against its points for a prime `p`: `p^2 + p + 1`
/// vertices per side, all of degree `p + 1`. Two lines meet in exactly one
/// point, so `s` lines cover at least `s (p + 1) - s (s - 1) / 2` points.
pub fn pg(p: u32) -> BipartiteGraph {
    let pts = pg_points(p);
    let adj = pts
        .iter()
        .map(|l| {
            (0..pts.len())
                .filter(|&q| (0..3).map(|i| l[i] * pts[q][i]).sum::<u32>() % p == 0)
                .collect()
        })
        .collect();
    let (n, d) = (pts.len(), p as usize + 1);
    BipartiteGraph::from_adjacency(n, n, d, d, adj).expect("projective planes are regular")
}

/// PG(2,3): 13 + 13 vertices of degree 4.
pub fn pg23() -> BipartiteGraph {
    pg(3)
}

/// Multiplication in GF(4) with elements encoded as polynomials over GF(2)
/// modulo x^2 + x + 1; addition is XOR.
fn gf4_mul(a: u8, b: u8) -> u8 {
    let mut r = 0u8;
    for i in 0..2 {
        if b >> i & 1 == 1 {
            r ^= a << i;
        }
    }
    if r & 4 != 0 {
        r ^= 0b111;
    }
    r
}

/// Lines of AG(2,4) against its points: 20 lines of 4 points, 16 points on
/// 5 lines each.
pub fn ag24() -> BipartiteGraph {
    let point = |x: u8, y: u8| (x as usize) * 4 + y as usize;
    let mut adj: Vec<Vec<usize>> = Vec::new();
    for m in 0..4u8 {
        for c in 0..4u8 {
            let mut line: Vec<usize> = (0..4u8).map(|x| point(x, gf4_mul(m, x) ^ c)).collect();
            line.sort_unstable();
            adj.push(line);
        }
    }
    for c in 0..4u8 {
        adj.push((0..4u8).map(|y| point(c, y)).collect());
    }
    BipartiteGraph::from_adjacency(20, 16, 4, 5, adj).expect("AG(2,4) is (4,5)-biregular")
}
