use std::sync::Arc;

use super::EventAlgebra;

/// A maximal Boolean subalgebra: its elements (parent indices, ascending)
/// and the induced carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub elements: Vec<usize>,
    pub algebra: Arc<EventAlgebra>,
}

fn is_boolean_subset(alg: &EventAlgebra, members: &[bool], elems: &[usize]) -> bool {
    let inside = |x: Option<usize>| x.is_some_and(|x| members[x]);
    for &x in elems {
        if alg.meet(x, alg.ortho(x)) != Some(alg.bottom()) {
            return false;
        }
        for &y in elems {
            if !inside(alg.join(x, y)) || !inside(alg.meet(x, y)) {
                return false;
            }
        }
    }
    for &a in elems {
        for &b in elems {
            for &c in elems {
                let lhs = alg.meet(a, alg.join(b, c).unwrap());
                let rhs = alg.join(alg.meet(a, b).unwrap(), alg.meet(a, c).unwrap());
                if lhs != rhs {
                    return false;
                }
            }
        }
    }
    true
}

/// All maximal subsets that contain `0` and `1`, are closed under ortho,
/// meet and join (computed in `alg`), and are distributive and complemented.
///
/// Ordered lexicographically by their sorted element-id lists. Block
/// algebras are named `<alg>_block<i>` in that order.
pub fn enumerate_blocks(alg: &EventAlgebra) -> Vec<Block> {
    let (top, bottom) = (alg.top(), alg.bottom());
    let mut orbits: Vec<(usize, usize)> = Vec::new();
    for x in alg.elements() {
        let o = alg.ortho(x);
        if x == top || x == bottom || o < x {
            continue;
        }
        orbits.push((x, o));
    }
    let mut found: Vec<Vec<usize>> = Vec::new();
    for mask in 0u64..(1u64 << orbits.len()) {
        let mut members = vec![false; alg.len()];
        members[top] = true;
        members[bottom] = true;
        for (i, &(x, o)) in orbits.iter().enumerate() {
            if mask >> i & 1 == 1 {
                members[x] = true;
                members[o] = true;
            }
        }
        let elems: Vec<usize> = alg.elements().filter(|&x| members[x]).collect();
        if is_boolean_subset(alg, &members, &elems) {
            found.push(elems);
        }
    }
    let contained = |small: &Vec<usize>, big: &Vec<usize>| {
        small.len() < big.len() && small.iter().all(|x| big.binary_search(x).is_ok())
    };
    let mut maximal: Vec<Vec<usize>> = found
        .iter()
        .filter(|s| !found.iter().any(|b| contained(s, b)))
        .cloned()
        .collect();
    let sorted_ids = |s: &Vec<usize>| {
        let mut ids = alg.ids_of(s);
        ids.sort();
        ids
    };
    maximal.sort_by_key(sorted_ids);
    maximal
        .into_iter()
        .enumerate()
        .map(|(i, elements)| {
            let algebra = alg
                .subalgebra(&format!("{}_block{}", alg.name(), i), &elements)
                .expect("ortho-closed subset containing the top");
            Block {
                elements,
                algebra: Arc::new(algebra),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::validate_boolean_algebra;
    use crate::corpus;

    fn ids(alg: &EventAlgebra, blocks: &[Block]) -> Vec<Vec<String>> {
        blocks.iter().map(|b| alg.ids_of(&b.elements)).collect()
    }

    #[test]
    fn blocks_of_small_algebras() {
        let two = corpus::two_element();
        assert_eq!(ids(&two, &enumerate_blocks(&two)), vec![vec!["0", "1"]]);

        let mo2 = corpus::mo2();
        assert_eq!(
            ids(&mo2, &enumerate_blocks(&mo2)),
            vec![vec!["0", "a", "a_c", "1"], vec!["0", "b", "b_c", "1"]]
        );

        let b8 = corpus::b8();
        let blocks = enumerate_blocks(&b8);
        assert_eq!(blocks.len(), 1);
        assert_eq!(blocks[0].elements.len(), 8);
    }

    #[test]
    fn g3_has_three_blocks_of_eight() {
        let g3 = corpus::g3();
        let blocks = enumerate_blocks(&g3);
        assert_eq!(blocks.len(), 3);
        assert!(blocks.iter().all(|b| b.elements.len() == 8));
    }

    #[test]
    fn blocks_are_boolean_maximal_and_cover() {
        for alg in corpus::algebras() {
            let blocks = enumerate_blocks(&alg);
            for b in &blocks {
                assert!(validate_boolean_algebra(&b.algebra).passed());
                for other in &blocks {
                    if other != b {
                        assert!(!b.elements.iter().all(|x| other.elements.contains(x)));
                    }
                }
            }
            for x in alg.elements() {
                assert!(
                    blocks.iter().any(|b| b.elements.contains(&x)),
                    "{} has no context in {}",
                    alg.id(x),
                    alg.name()
                );
            }
        }
    }
}
