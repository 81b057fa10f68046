use std::collections::VecDeque;

use super::{ErrorClass, PauliOperator, StringKind, TorusCode};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistanceSearch {
    /// Every Pauli operator (X, Y or Z on each support qubit).
    Full,
    /// Pure-X and pure-Z operators only. Sufficient because the X or the Z
    /// part of any logical operator is itself logical and no heavier.
    SectorSplit,
}

/// Smallest weight `w <= max_weight` of a logical operator, found by
/// enumerating all operators of each weight in turn.
pub fn min_logical_weight(code: &TorusCode, search: DistanceSearch, max_weight: usize) -> Option<usize> {
    let n = code.num_qubits();
    (1..=max_weight.min(n)).find(|&w| {
        let mut support = Vec::with_capacity(w);
        any_support(n, w, 0, &mut support, &mut |s| match search {
            DistanceSearch::SectorSplit => {
                is_logical(code, &PauliOperator::x_on(n, s.iter().copied()))
                    || is_logical(code, &PauliOperator::z_on(n, s.iter().copied()))
            }
            DistanceSearch::Full => (0..3usize.pow(w as u32)).any(|mut code_word| {
                let mut op = PauliOperator::identity(n);
                for &q in s {
                    match code_word % 3 {
                        0 => op.flip_x(q),
                        1 => op.flip_z(q),
                        _ => {
                            op.flip_x(q);
                            op.flip_z(q);
                        }
                    }
                    code_word /= 3;
                }
                is_logical(code, &op)
            }),
        })
    })
}

fn is_logical(code: &TorusCode, op: &PauliOperator) -> bool {
    matches!(code.classify(op), Ok(ErrorClass::Logical(_)))
}

/// Calls `f` on each `w`-subset of `start..n` in lexicographic order until it
/// returns true.
fn any_support(
    n: usize,
    w: usize,
    start: usize,
    chosen: &mut Vec<usize>,
    f: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if chosen.len() == w {
        return f(chosen);
    }
    for q in start..n {
        if n - q < w - chosen.len() {
            break;
        }
        chosen.push(q);
        let hit = any_support(n, w, q + 1, chosen, f);
        chosen.pop();
        if hit {
            return true;
        }
    }
    false
}

/// Length of the shortest closed walk with nonzero winding, by breadth-first
/// search on the four-sheeted cover of the lattice (`StringKind::Z`) or the
/// dual lattice (`StringKind::X`). Sheets record crossing parities with the
/// two reference cycles of the opposite type.
pub fn shortest_nontrivial_cycle(code: &TorusCode, kind: StringKind) -> usize {
    let sites = code.num_sites();
    let (ref0, ref1) = match kind {
        StringKind::Z => (code.x_cut(0), code.x_cut(1)),
        StringKind::X => (code.z_loop(0), code.z_loop(1)),
    };
    let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); sites];
    for e in 0..code.num_qubits() {
        let [a, b] = match kind {
            StringKind::Z => code.endpoints(e),
            StringKind::X => code.faces_of(e),
        };
        let flip = ref0.contains(&e) as usize | (ref1.contains(&e) as usize) << 1;
        adjacency[a].push((b, flip));
        adjacency[b].push((a, flip));
    }
    let mut best = usize::MAX;
    for start in 0..sites {
        let mut dist = vec![usize::MAX; sites * 4];
        dist[start * 4] = 0;
        let mut queue = VecDeque::from([(start, 0usize)]);
        while let Some((site, sheet)) = queue.pop_front() {
            let d = dist[site * 4 + sheet];
            if site == start && sheet != 0 {
                best = best.min(d);
                break;
            }
            for &(next, flip) in &adjacency[site] {
                let node = next * 4 + (sheet ^ flip);
                if dist[node] == usize::MAX {
                    dist[node] = d + 1;
                    queue.push_back((next, sheet ^ flip));
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_search_small_sizes() {
        for k in [2, 3] {
            let code = TorusCode::new(k).unwrap();
            assert_eq!(min_logical_weight(&code, DistanceSearch::Full, k), Some(k));
            assert_eq!(min_logical_weight(&code, DistanceSearch::Full, k - 1), None);
        }
    }

    #[test]
    fn sector_split_k4() {
        let code = TorusCode::new(4).unwrap();
        assert_eq!(min_logical_weight(&code, DistanceSearch::SectorSplit, 4), Some(4));
    }

    #[test]
    fn cover_graph_cycles_have_length_k() {
        for k in 2..=9 {
            let code = TorusCode::new(k).unwrap();
            assert_eq!(shortest_nontrivial_cycle(&code, StringKind::Z), k);
            assert_eq!(shortest_nontrivial_cycle(&code, StringKind::X), k);
        }
    }
}
