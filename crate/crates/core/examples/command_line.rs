//! Drives the command-line interface in-process: generate a planted graph,
//! embed it, partition it and plot the result in a scratch directory.

use ellembed::cli::main_with_args;

fn main() {
    let dir = std::env::temp_dir().join("ellembed-command-line-example");
    let d = |name: &str| dir.join(name).to_string_lossy().into_owned();
    let steps: Vec<Vec<String>> = vec![
        vec!["generate".into(), "--n".into(), "150".into(), "--seed".into(), "1".into(), "--out".into(), d("data")],
        vec!["embed".into(), "--input".into(), d("data/edges.txt"), "--d0".into(), "10".into(), "--out".into(), d("embed")],
        vec![
            "partition".into(),
            "--input".into(),
            d("data/edges.txt"),
            "--pipeline".into(),
            "--truth".into(),
            d("data/truth.txt"),
            "--d0".into(),
            "10".into(),
            "--out".into(),
            d("part"),
        ],
        vec![
            "plot".into(),
            "--embedding".into(),
            d("part/embedding.csv"),
            "--labels".into(),
            d("part/partition.csv"),
            "--output".into(),
            d("scatter.svg"),
        ],
    ];
    for args in steps {
        let code = main_with_args(std::iter::once("ellembed".to_owned()).chain(args.iter().cloned()));
        println!("ellembed {} -> exit {code}", args.join(" "));
        if code != 0 {
            std::process::exit(code);
        }
    }
    println!("{}", std::fs::read_to_string(dir.join("part/summary.json")).unwrap());
}
