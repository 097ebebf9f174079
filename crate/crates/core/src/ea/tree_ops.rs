//! GP variation: five crossover operators and subtree mutation.
//!
//! Every operator yields a single child. When the child breaks the depth or
//! node limits the operator is retried; after five failures a copy of the
//! first parent is returned.

use rand::Rng;

use crate::encoding::tree::{grow, GpTree, Node, TreeParams};

const RETRIES: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeCrossover {
    /// Swap a random subtree of `b` into a random point of `a`.
    Simple,
    /// Per-node exchange over the common region.
    Uniform,
    /// Donor subtree size limited to `1 + 2 * |removed subtree|`.
    SizeFair,
    /// A single point within the arity-matched common region.
    OnePoint,
    /// Points restricted to identical coordinates in both parents.
    ContextPreserving,
}

pub const TREE_CROSSOVERS: [TreeCrossover; 5] = [
    TreeCrossover::Simple,
    TreeCrossover::Uniform,
    TreeCrossover::SizeFair,
    TreeCrossover::OnePoint,
    TreeCrossover::ContextPreserving,
];

/// Applies one uniformly chosen crossover operator.
pub fn crossover_tree<R: Rng + ?Sized>(a: &GpTree, b: &GpTree, params: &TreeParams, rng: &mut R) -> GpTree {
    let op = TREE_CROSSOVERS[rng.random_range(0..TREE_CROSSOVERS.len())];
    crossover_with(op, a, b, params, rng)
}

pub fn crossover_with<R: Rng + ?Sized>(
    op: TreeCrossover,
    a: &GpTree,
    b: &GpTree,
    params: &TreeParams,
    rng: &mut R,
) -> GpTree {
    for _ in 0..RETRIES {
        let child = match op {
            TreeCrossover::Simple => simple(a, b, rng),
            TreeCrossover::Uniform => uniform(a, b, rng),
            TreeCrossover::SizeFair => size_fair(a, b, rng),
            TreeCrossover::OnePoint => common_point(a, b, true, rng),
            TreeCrossover::ContextPreserving => common_point(a, b, false, rng),
        };
        if child.fits(params) {
            return child;
        }
    }
    a.clone()
}

fn simple<R: Rng + ?Sized>(a: &GpTree, b: &GpTree, rng: &mut R) -> GpTree {
    let i = rng.random_range(0..a.len());
    let j = rng.random_range(0..b.len());
    a.replace_subtree(i, b.subtree(j))
}

fn uniform<R: Rng + ?Sized>(a: &GpTree, b: &GpTree, rng: &mut R) -> GpTree {
    fn walk<R: Rng + ?Sized>(a: &GpTree, ia: usize, b: &GpTree, ib: usize, out: &mut Vec<Node>, rng: &mut R) {
        let (na, nb) = (a.nodes()[ia], b.nodes()[ib]);
        if na.arity() > 0 && na.arity() == nb.arity() {
            // interior of the common region: inherit the label, keep descending
            out.push(if rng.random_bool(0.5) { na } else { nb });
            for (ca, cb) in a.children(ia).into_iter().zip(b.children(ib)) {
                walk(a, ca, b, cb, out, rng);
            }
        } else {
            // boundary: inherit the whole subtree
            let donor = if rng.random_bool(0.5) {
                a.subtree(ia)
            } else {
                b.subtree(ib)
            };
            out.extend_from_slice(donor);
        }
    }
    let mut out = Vec::with_capacity(a.len().max(b.len()));
    walk(a, 0, b, 0, &mut out, rng);
    GpTree::from_prefix_unchecked(out)
}

fn size_fair<R: Rng + ?Sized>(a: &GpTree, b: &GpTree, rng: &mut R) -> GpTree {
    let i = rng.random_range(0..a.len());
    let removed = a.subtree_end(i) - i;
    let limit = 1 + 2 * removed;
    let candidates: Vec<usize> = (0..b.len()).filter(|&j| b.subtree_end(j) - j <= limit).collect();
    // leaves always qualify, so the candidate list is never empty
    let j = candidates[rng.random_range(0..candidates.len())];
    a.replace_subtree(i, b.subtree(j))
}

/// Node pairs at the same coordinates in both trees. With `same_arity`
/// descent stops below nodes whose arities differ (the one-point common
/// region); otherwise any coordinate present in both trees is kept.
pub fn common_region(a: &GpTree, b: &GpTree, same_arity: bool) -> Vec<(usize, usize)> {
    fn walk(a: &GpTree, ia: usize, b: &GpTree, ib: usize, same_arity: bool, out: &mut Vec<(usize, usize)>) {
        out.push((ia, ib));
        let (na, nb) = (a.nodes()[ia], b.nodes()[ib]);
        if same_arity && na.arity() != nb.arity() {
            return;
        }
        for (ca, cb) in a.children(ia).into_iter().zip(b.children(ib)) {
            walk(a, ca, b, cb, same_arity, out);
        }
    }
    let mut out = Vec::new();
    walk(a, 0, b, 0, same_arity, &mut out);
    out
}

fn common_point<R: Rng + ?Sized>(a: &GpTree, b: &GpTree, same_arity: bool, rng: &mut R) -> GpTree {
    let region = common_region(a, b, same_arity);
    let (i, j) = region[rng.random_range(0..region.len())];
    a.replace_subtree(i, b.subtree(j))
}

/// Replaces a uniformly chosen node's subtree with a fresh grown subtree
/// that keeps the tree within `params.max_depth`.
pub fn mutate_tree<R: Rng + ?Sized>(t: &GpTree, n: u32, params: &TreeParams, rng: &mut R) -> GpTree {
    let levels = t.levels();
    for _ in 0..RETRIES {
        let i = rng.random_range(0..t.len());
        let room = params.max_depth.saturating_sub(levels[i]) + 1;
        let fresh = grow(n, room, params.max_nodes, rng);
        let child = t.replace_subtree(i, fresh.nodes());
        if child.fits(params) {
            return child;
        }
    }
    t.clone()
}
