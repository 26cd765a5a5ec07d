use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpStream;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_artgallery"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn generate_solve_check() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&run(d, &["generate", "circle", "-o", "c.json"])), 0);

    let o = run(d, &["solve", "c.json", "--deterministic"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("optimal 2"));
    let o = run(d, &["solve", "c.json", "--kmax", "1"]);
    assert_eq!(code(&o), 2, "{}", stdout(&o));

    let o = run(d, &["check", "c.json", "--guards", "0,0; 4,0"]);
    assert_eq!(code(&o), 0);
    let o = run(d, &["check", "c.json", "--guards", "1,0;3,0"]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("s1.P_upper"));
    assert_eq!(code(&run(d, &["check", "c.json", "--guards", "1,zero"])), 1);
}

#[test]
fn family_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&run(d, &["generate", "clover", "--k", "3", "-o", "k.json"])), 0);
    assert_eq!(code(&run(d, &["generate", "grid", "--h", "3", "--v", "2", "-o", "g.json"])), 0);
    let a = std::fs::read_to_string(d.join("g.json")).unwrap();
    let b = stdout(&run(d, &["generate", "grid(3,2)"]));
    assert_eq!(a, b);
    assert_eq!(code(&run(d, &["generate", "clover", "--k", "1"])), 1);
    assert_eq!(code(&run(d, &["generate", "grid", "--k", "2"])), 1);
    assert_eq!(code(&run(d, &["generate", "dodecahedron"])), 1);
    assert_eq!(code(&run(d, &["solve", "missing.json"])), 1);
}

#[test]
fn sample_betti_render_validate() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    run(d, &["generate", "circle", "-o", "c.json"]);
    assert_eq!(code(&run(d, &["sample", "c.json", "-r", "16", "-o", "cloud.json"])), 0);
    let o = run(d, &["betti", "cloud.json", "--dim", "1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("b0=1 b1=1"), "{}", stdout(&o));

    let o = run(d, &["render", "c.json", "--layers", "polygon,segments,placement", "--guards", "0,0;4,0"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).matches("<circle").count(), 2);
    assert_eq!(code(&run(d, &["render", "c.json", "--layers", "polygon,glow"])), 1);

    let o = run(d, &["validate", "c.json"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("nerve matches segment nerve: true"));
}

#[test]
fn compile_faces_file() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("f.json"), r#"{"dimension": 1, "faces": [{"1": 0}]}"#).unwrap();
    assert_eq!(code(&run(d, &["compile", "f.json", "-o", "g.json"])), 0);
    let o = run(d, &["solve", "g.json"]);
    assert!(stdout(&o).starts_with("optimal 3"));
    let o = run(d, &["validate", "g.json"]);
    assert!(stdout(&o).contains("compiler certificate: ok"), "{}", stdout(&o));
    std::fs::write(d.join("bad.json"), r#"{"dimension": 1, "faces": [{"1": 5}]}"#).unwrap();
    assert_eq!(code(&run(d, &["compile", "bad.json"])), 1);
}

#[test]
fn serve_answers_over_http() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    run(d, &["generate", "circle", "-o", "c.json"]);
    let mut child = bin().current_dir(d).args(["serve", "c.json", "--port", "0"]).stderr(Stdio::piped()).spawn().unwrap();
    let mut line = String::new();
    BufReader::new(child.stderr.take().unwrap()).read_line(&mut line).unwrap();
    let addr = line.trim().rsplit("http://").next().unwrap().to_string();

    let body = r#"{"guards": [["0","0"],["4","0"]]}"#;
    let mut s = TcpStream::connect(&addr).unwrap();
    write!(s, "POST /check HTTP/1.1\r\nHost: x\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}", body.len()).unwrap();
    let mut resp = String::new();
    s.read_to_string(&mut resp).unwrap();
    child.kill().unwrap();
    child.wait().unwrap();
    assert!(resp.starts_with("HTTP/1.1 200"), "{resp}");
    assert!(resp.contains(r#""fully_covered":true"#));
}
