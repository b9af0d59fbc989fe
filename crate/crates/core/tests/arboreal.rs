use slk_core::arboreal::{build_complex_with, graft_chain_map, SignConvention, DEFAULT_BOUND};
use slk_core::fieldlin::Prime;
use slk_core::forest::Tree;

fn factorial(n: u32) -> usize {
    (1..=n as usize).product()
}

#[test]
fn homology_is_concentrated_in_the_bottom_degree() {
    for p in [3, 5] {
        let p = Prime::new(p).unwrap();
        for n in 2..=6 {
            for conv in [SignConvention::EdgePreorder, SignConvention::EdgeClade] {
                let h = build_complex_with(n, p, conv, DEFAULT_BOUND).unwrap().homology().unwrap();
                let got: Vec<_> = h.dims.into_iter().collect();
                assert_eq!(got, [(1 - n as i64, factorial(n - 1))], "n = {n}, {conv:?}");
            }
        }
    }
}

#[test]
fn cell_counts_of_four_leaves() {
    let c = build_complex_with(4, Prime::new(3).unwrap(), SignConvention::default(), 4).unwrap();
    let counts: Vec<usize> = c.degrees().map(|d| c.basis(d).len()).collect();
    assert_eq!(counts, [1, 10, 15]);
    assert_eq!(c.labels(-1), ["(1,2,3,4)"]);
}

#[test]
fn grafting_uniform_corollas_adds_vertices() {
    for p in [3u32, 5] {
        let tp = Tree::corolla(p);
        let parts = vec![tp.clone(); p as usize];
        let cell = graft_chain_map(&tp, &parts, None).unwrap();
        assert_eq!(cell.tree.leaves(), p * p);
        assert_eq!(cell.degree, -(p as i64 + 1));
    }
}
