use benney_bench::{row_operator, smooth_run};

#[test]
fn fixtures_are_consistent() {
    let op = row_operator(2, 9);
    assert_eq!(op.coords().len(), 10);
    let (s, p) = smooth_run(64, 0.01);
    assert_eq!((p.n, p.m), (s.n(), s.m()));
}
