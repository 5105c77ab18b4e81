use bipratio::gen::gnp;
use bipratio::io::{graph_from_text, read_graph, write_edge_list, write_weights};
use bipratio::Error;

#[test]
fn files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let g = gnp(15, 0.3, 9, 2).unwrap();
    let edges = dir.path().join("g.txt");
    let weights = dir.path().join("b.txt");
    std::fs::write(&edges, write_edge_list(g.n(), g.edges())).unwrap();
    std::fs::write(&weights, write_weights(g.b())).unwrap();
    assert_eq!(read_graph(&edges, None).unwrap(), g);
    assert_eq!(read_graph(&edges, Some(&weights)).unwrap(), g);
}

#[test]
fn custom_weights_are_used() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("e.txt");
    let weights = dir.path().join("w.txt");
    std::fs::write(&edges, "# path\n3 2\n1 2 4\n2 3 1\n").unwrap();
    std::fs::write(&weights, "1\n1\n7\n").unwrap();
    let g = read_graph(&edges, Some(&weights)).unwrap();
    assert_eq!(g.b(), &[1, 1, 7]);
    assert_eq!(g.total_weight(), 5);
}

#[test]
fn errors_name_the_line_or_file() {
    match read_graph(std::path::Path::new("/nonexistent/g.txt"), None) {
        Err(Error::Io(msg)) => assert!(msg.contains("/nonexistent/g.txt")),
        other => panic!("{other:?}"),
    }
    match graph_from_text("2 1\n\n# ok\n1 2 x\n", None) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
        other => panic!("{other:?}"),
    }
    match graph_from_text("2 1\n1 2 1\n", Some("1\n")) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
        other => panic!("{other:?}"),
    }
}
