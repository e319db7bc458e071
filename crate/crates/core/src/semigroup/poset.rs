/// Depth of every element under a preorder `le` on `0..m`: the length of the
/// longest strict chain from the element's class up to a maximal class.
pub fn preorder_depths(m: usize, le: impl Fn(usize, usize) -> bool) -> Vec<usize> {
    let rel: Vec<Vec<bool>> = (0..m).map(|i| (0..m).map(|j| le(i, j)).collect()).collect();
    let above: Vec<Vec<usize>> = (0..m)
        .map(|i| (0..m).filter(|&j| rel[i][j] && !rel[j][i]).collect())
        .collect();
    let mut depth: Vec<Option<usize>> = vec![None; m];
    // elements ordered by number of strict upper bounds: an upper bound always has fewer
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&i| above[i].len());
    for &i in &order {
        let d = above[i]
            .iter()
            .map(|&j| depth[j].expect("upper bounds come first") + 1)
            .max()
            .unwrap_or(0);
        depth[i] = Some(d);
    }
    depth.into_iter().map(Option::unwrap).collect()
}
