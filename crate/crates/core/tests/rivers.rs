use triform::form;
use triform::rivers::{build_river, export_graph, ExportFormat, EdgeKind, DEFAULT_RIVER_BOUND};

#[test]
fn dot_snapshot() {
    let g = build_river(&form![1, 1, 2], 60, DEFAULT_RIVER_BOUND).unwrap();
    let want = include_str!("golden/river_112_cap60.dot");
    assert_eq!(export_graph(&g, ExportFormat::Dot), want);
}

#[test]
fn json_export_is_deterministic() {
    let a = export_graph(&build_river(&form![1, 1, 2], 600, DEFAULT_RIVER_BOUND).unwrap(), ExportFormat::Json);
    let b = export_graph(&build_river(&form![1, 1, 2], 600, DEFAULT_RIVER_BOUND).unwrap(), ExportFormat::Json);
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["edges"].as_array().unwrap().iter().filter(|e| e["kind"] == "drop").count(), 2);
}

#[test]
fn drop_edges_pass_through_old_images() {
    let g = build_river(&form![1, 1, 2], 3000, DEFAULT_RIVER_BOUND).unwrap();
    for e in g.drop_edges() {
        let EdgeKind::Drop { height } = e.kind else { unreachable!() };
        let img = e.image.as_ref().unwrap();
        assert_eq!(img.rank(), e.to.rank() + height);
        assert!(matches!(triform::classify::is_old(img, 2000).unwrap(), triform::classify::Oldness::Old(_)));
    }
    // every node stabilizes, possibly after a drop, onto the mouth
    for x in &g.nodes {
        let t = triform::watson::stabilize(x).unwrap().terminal;
        assert!(t == g.mouth || g.drop_edges().any(|e| g.ancestors(&e.from).contains(x)), "{x} -> {t}");
    }
}

#[test]
fn mainstream_of_1133() {
    let g = triform::rivers::build_upstream(&form![1, 1, 3, 3], 3000, DEFAULT_RIVER_BOUND, &[]).unwrap();
    let s = triform::rivers::describe_streams(&g, &form![1, 1, 3, 3]).unwrap();
    assert_eq!(s.mainstreams.len(), 1);
    let chain = &s.mainstreams[0];
    assert_eq!(&chain[..4], &[form![1, 1, 3, 3], form![1, 3, 3, 9], form![1, 1, 3, 27], form![1, 3, 3, 81]]);
}
