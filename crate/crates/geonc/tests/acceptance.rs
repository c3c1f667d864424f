//! Acceptance gate, CLI half: re-running any command with identical flags and
//! seed must produce byte-identical output files.

use std::fs;
use std::path::Path;
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_geonc");

fn run(args: &[&str], envs: &[(&str, &str)]) {
    let out = Command::new(BIN)
        .args(args)
        .envs(envs.iter().map(|&(k, v)| (k, v)))
        .output()
        .expect("spawn geonc");
    assert!(
        out.status.success(),
        "geonc {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

fn bytes(p: &Path) -> Vec<u8> {
    fs::read(p).unwrap_or_else(|e| panic!("read {p:?}: {e}"))
}

#[test]
fn criterion_10_cli_determinism() {
    let result = std::panic::catch_unwind(|| {
        let dir = tempfile::tempdir().unwrap();
        let d = dir.path();

        let config = d.join("scenario.json");
        fs::write(
            &config,
            r#"{"k": 10, "n": 13, "m": 4, "q": 8, "eps": [0.1, 0.1],
                "codec": "systematic", "relay_mode": "t_matrix", "trials": 500}"#,
        )
        .unwrap();
        let script = d.join("events.txt");
        fs::write(
            &script,
            "request_activate\ninstantiation_ack\nstats_update 0.03\nrequest_terminate\ntermination_ack\n",
        )
        .unwrap();
        let links = d.join("links.csv");
        fs::write(
            &links,
            "node_id,peer_id,lat,lon,eps_est,samples,updated_at\n\
             a,b,45.0,9.0,0.1,10,100\nb,c,45.1,9.1,0.2,10,100\n",
        )
        .unwrap();
        let store = d.join("store.csv");
        run(&["geo", "ingest", "--store", store.to_str().unwrap(), "--input", links.to_str().unwrap()], &[]);

        let cfg = config.to_str().unwrap();
        let commands: Vec<(&str, Vec<String>, Vec<(&str, &str)>)> = vec![
            (
                "analyze",
                vec![
                    "analyze", "--k", "20", "--q", "8", "--m", "4", "--eps", "0.1,0.15",
                    "--n-range", "21:30", "--rho0", "0.8",
                ]
                .into_iter()
                .map(String::from)
                .collect(),
                vec![],
            ),
            (
                "simulate",
                vec!["simulate", "--config", cfg, "--seed", "42"]
                    .into_iter()
                    .map(String::from)
                    .collect(),
                vec![],
            ),
            (
                "simulate-envseed",
                vec!["simulate", "--config", cfg].into_iter().map(String::from).collect(),
                vec![("NCF_SEED", "7")],
            ),
            (
                "rate-region",
                vec![
                    "rate-region", "--k", "20", "--q", "8", "--eta0", "0.05", "--r-min", "0.5",
                    "--r-max", "1.0", "--grid", "9",
                ]
                .into_iter()
                .map(String::from)
                .collect(),
                vec![],
            ),
            (
                "optimize",
                vec![
                    "optimize", "--k", "20", "--m", "16", "--q", "8", "--eps", "0.1,0.1",
                    "--rho0", "0.8", "--beta0", "2000000",
                ]
                .into_iter()
                .map(String::from)
                .collect(),
                vec![],
            ),
            (
                "connectivity",
                vec![
                    "connectivity", "--k", "20", "--m", "16", "--q", "8", "--eps", "0.1",
                    "--rho0", "0.8", "--beta0", "1500000", "--h-max", "32",
                ]
                .into_iter()
                .map(String::from)
                .collect(),
                vec![],
            ),
            (
                "geo-path",
                vec!["geo", "path", "--store", store.to_str().unwrap(), "--nodes", "a,b,c"]
                    .into_iter()
                    .map(String::from)
                    .collect(),
                vec![],
            ),
            (
                "lifecycle",
                vec!["lifecycle", "--script", script.to_str().unwrap()]
                    .into_iter()
                    .map(String::from)
                    .collect(),
                vec![],
            ),
        ];

        for (name, args, envs) in &commands {
            // identical flags both times: same output path, snapshot in between
            let out = d.join(format!("{name}.out"));
            let mut full: Vec<&str> = args.iter().map(String::as_str).collect();
            full.push("--output");
            full.push(out.to_str().unwrap());
            run(&full, envs);
            let first = bytes(&out);
            fs::remove_file(&out).unwrap();
            run(&full, envs);
            assert_eq!(first, bytes(&out), "command {name} not byte-identical");
        }
    });
    match result {
        Ok(()) => println!("criterion 10: PASS - CLI re-runs are byte-identical per seed"),
        Err(cause) => {
            println!("criterion 10: FAIL - CLI re-runs are byte-identical per seed");
            std::panic::resume_unwind(cause);
        }
    }
}
