//! Largest-magnitude selection with a deterministic tie rule.

/// Entries of `|φ|` within this absolute distance of the maximum count as
/// tied; the lowest index among them wins.
pub const TIE_TOL: f64 = 1e-6;

/// Index maximizing `|phi[l]|` over eligible `l`, lowest index among ties.
pub fn argmax_magnitude(phi: &[f64], eligible: impl Fn(usize) -> bool) -> Option<usize> {
    let best = phi
        .iter()
        .enumerate()
        .filter(|&(l, _)| eligible(l))
        .map(|(_, v)| v.abs())
        .fold(f64::NEG_INFINITY, f64::max);
    if best == f64::NEG_INFINITY {
        return None;
    }
    phi.iter()
        .enumerate()
        .find(|&(l, v)| eligible(l) && v.abs() >= best - TIE_TOL)
        .map(|(l, _)| l)
}

/// The `count` eligible indices ranked by decreasing `|phi|`, applying the
/// same tie rule as [`argmax_magnitude`] at every rank, so the head of the
/// ranking is always the [`argmax_magnitude`] pick.
pub fn rank_by_magnitude(
    phi: &[f64],
    eligible: impl Fn(usize) -> bool,
    count: usize,
) -> Vec<usize> {
    let mut order: Vec<usize> = (0..phi.len()).filter(|&l| eligible(l)).collect();
    order.sort_by(|&a, &b| phi[b].abs().total_cmp(&phi[a].abs()).then(a.cmp(&b)));
    let mut out = Vec::with_capacity(count.min(order.len()));
    while out.len() < count && !order.is_empty() {
        let top = phi[order[0]].abs();
        // the tied run is contiguous in sorted order
        let mut end = 1;
        while end < order.len() && phi[order[end]].abs() >= top - TIE_TOL {
            end += 1;
        }
        let (pos, _) = order[..end]
            .iter()
            .enumerate()
            .min_by_key(|&(_, &l)| l)
            .expect("nonempty run");
        let pick = order.remove(pos);
        out.push(pick);
    }
    out
}
