use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use log::info;
use rayon::prelude::*;

use madcc_core::array::{find_phi, verify_dpda, verify_pda, PdaReport, Regularity};
use madcc_core::compare::{
    complete_members, complete_row, design_points, jcm_points, memory_share, render_csv, render_load_csv,
    render_subpacketization_csv, render_text, summary_checks, summary_table, tdesign_table, tgdd_table, ComparisonRow,
    MemoryLoadPoint, RowCheck, SummaryParams,
};
use madcc_core::design::{
    complete_design, crd_profile, design_profile, dual_design, gdd_profile, oa_min_distance, oa_profile, proper_oa,
    reed_solomon_oa, resolvable_from_code, trivial_gdd, Design, DesignParams, GroupDivisibleDesign, OaProfile,
    OrthogonalArray, Profile, Resolution,
};
use madcc_core::format::{
    parse_design, parse_gdd, parse_oa, parse_pda, read_bundle, write_bundle, write_design, write_gdd, write_oa,
    write_resolution,
};
use madcc_core::math::{fmt_ratio, parse_ratio};
use madcc_core::scheme::{
    complete_family_scheme, oa_user_scheme, tdesign_scheme, tgdd_scheme, trivial_gdd_scheme, Family, SchemeBundle,
    TdesignVariant,
};
use madcc_core::sim::{run_experiment, DemandMode, ExperimentConfig};
use madcc_core::{fixtures, Error};

use crate::{Command, CompareCmd, DesignCmd, FamilyArg, Output, SchemeArgs, SchemeKind, SimulateArgs};

/// A structure was built or read but failed its check.
#[derive(Debug)]
struct CheckFailed(String);

impl fmt::Display for CheckFailed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for CheckFailed {}

/// Simulation stopped before every user recovered its file.
#[derive(Debug)]
struct Undecodable(Error);

impl fmt::Display for Undecodable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "decode failed: {}", self.0)
    }
}

impl std::error::Error for Undecodable {}

pub fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if cause.is::<Undecodable>() {
            return 3;
        }
        if cause.is::<CheckFailed>() {
            return 2;
        }
        if let Some(err) = cause.downcast_ref::<Error>() {
            return match err {
                Error::InvalidParameters(_) | Error::OutOfRange(_) | Error::Malformed { .. } => 1,
                Error::DecodeFailure { .. } => 3,
                _ => 2,
            };
        }
    }
    1
}

pub fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Design(c) => design(c),
        Command::Scheme(a) => scheme(a),
        Command::Simulate(a) => simulate(a),
        Command::Compare(c) => compare(c),
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn in_file<T>(path: &str, r: madcc_core::Result<T>) -> Result<T> {
    r.with_context(|| format!("in {path}"))
}

/// A built-in name or a design file, with any parallel classes.
fn load_design(arg: &str) -> Result<(Design, Vec<Vec<usize>>)> {
    if let Some(res) = fixtures::resolution_by_name(arg) {
        let classes = res.classes().to_vec();
        return Ok((res.into_design(), classes));
    }
    if let Some(d) = fixtures::design_by_name(arg) {
        return Ok((d, Vec::new()));
    }
    let f = in_file(arg, parse_design(&read_text(Path::new(arg))?))?;
    Ok((f.design, f.classes))
}

fn load_oa(arg: &str) -> Result<OrthogonalArray> {
    if let Some(oa) = fixtures::oa_by_name(arg) {
        return Ok(oa);
    }
    in_file(arg, parse_oa(&read_text(Path::new(arg))?).and_then(|f| f.into_oa()))
}

fn load_gdd(arg: &str) -> Result<GroupDivisibleDesign> {
    if let Some(g) = fixtures::gdd_by_name(arg) {
        return Ok(g);
    }
    in_file(arg, parse_gdd(&read_text(Path::new(arg))?))
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| anyhow!(Error::InvalidParameters(format!("--{flag} is required here"))))
}

fn design(cmd: DesignCmd) -> Result<()> {
    match cmd {
        DesignCmd::GenComplete { n, k, out } => emit(out.as_ref(), &write_design(&complete_design(n, k)?, &[])),
        DesignCmd::GenProperOa { q, m, out } => emit(out.as_ref(), &write_oa(&proper_oa(q, m)?)),
        DesignCmd::GenTrivialGdd { m, q, t, out } => emit(out.as_ref(), &write_gdd(&trivial_gdd(m, q, t)?)),
        DesignCmd::FromCode { q, columns, out } => {
            let cols = columns
                .iter()
                .map(|c| {
                    c.split(',')
                        .map(|x| x.trim().parse::<u32>().map_err(|_| Error::InvalidParameters(format!("bad column `{c}`"))))
                        .collect::<Result<Vec<u32>, Error>>()
                })
                .collect::<Result<Vec<_>, Error>>()?;
            emit(out.as_ref(), &write_resolution(&resolvable_from_code(q, &cols)?))
        }
        DesignCmd::Dual { input, out } => {
            let (d, _) = load_design(&input)?;
            emit(out.as_ref(), &write_design(&dual_design(&d)?, &[]))
        }
        DesignCmd::Verify { input, t } => verify(&input, t),
    }
}

fn header_word(text: &str) -> Option<&str> {
    text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#'))?.split_whitespace().next()
}

fn verify(input: &str, t: Option<usize>) -> Result<()> {
    let builtin = fixtures::resolution_by_name(input).is_some() || fixtures::design_by_name(input).is_some();
    if builtin {
        let (d, classes) = load_design(input)?;
        return verify_design(&d, &classes, t);
    }
    if let Some(oa) = fixtures::oa_by_name(input) {
        return verify_oa(oa.q(), oa.rows(), t);
    }
    if let Some(g) = fixtures::gdd_by_name(input) {
        return verify_gdd(&g, t);
    }
    let text = read_text(Path::new(input))?;
    match header_word(&text) {
        Some("design") => {
            let f = in_file(input, parse_design(&text))?;
            verify_design(&f.design, &f.classes, t)
        }
        Some("oa") => {
            let f = in_file(input, parse_oa(&text))?;
            verify_oa(f.q, &f.rows, t)
        }
        Some("gdd") => verify_gdd(&in_file(input, parse_gdd(&text))?, t),
        Some("pda") => verify_array(&text, input),
        _ => Err(anyhow!(Error::Malformed { line: 1, msg: format!("{input}: unknown file kind") })),
    }
}

fn verify_design(d: &Design, classes: &[Vec<usize>], t: Option<usize>) -> Result<()> {
    let k = d.block_size().ok_or_else(|| CheckFailed("blocks have different sizes".into()))?;
    let (t, lambda) = match t {
        Some(t) => match design_profile(d, t)? {
            Profile::Uniform(l) => (t, l),
            Profile::Nonuniform => bail!(CheckFailed(format!("not a {t}-design"))),
        },
        None => d.strength().ok_or_else(|| CheckFailed("not a t-design for any t".into()))?,
    };
    println!("{}", DesignParams { t, v: d.v(), k, lambda });
    if !classes.is_empty() {
        let res = Resolution::new(d.clone(), classes.to_vec())?;
        let p = crd_profile(&res);
        println!("resolvable r={}", res.r());
        match p.first() {
            Some(_) => {
                for (i, mu) in &p.mu {
                    if let Some(mu) = mu {
                        println!("CRD mu{i}={mu}");
                    }
                }
            }
            None => println!("not cross resolvable"),
        }
    }
    Ok(())
}

fn verify_oa(q: u32, rows: &[Vec<u32>], t: Option<usize>) -> Result<()> {
    let r = rows.first().map_or(0, Vec::len);
    match t {
        Some(t) => match oa_profile(rows, q, t)? {
            OaProfile::Index(idx) => println!("OA rows={} r={r} q={q} strength={t} index={idx}", rows.len()),
            OaProfile::NotAnOa => bail!(CheckFailed(format!("not an OA of strength {t}"))),
        },
        None => {
            let oa = OrthogonalArray::with_max_strength(q, rows.to_vec())?;
            println!("OA rows={} r={r} q={q} strength={} index={}", rows.len(), oa.strength(), oa.index());
            println!("min-distance={}", oa_min_distance(&oa)?);
        }
    }
    Ok(())
}

fn verify_gdd(g: &GroupDivisibleDesign, t: Option<usize>) -> Result<()> {
    let k = g.block_size().ok_or_else(|| CheckFailed("blocks have different sizes".into()))?;
    let (t, lambda) = match t {
        Some(t) => match gdd_profile(g, t)? {
            Profile::Uniform(l) => (t, l),
            Profile::Nonuniform => bail!(CheckFailed(format!("not a {t}-GDD"))),
        },
        None => g.strength().ok_or_else(|| CheckFailed("not a t-GDD for any t".into()))?,
    };
    println!("{t}-GDD m={} q={} k={k} lambda={lambda}", g.m(), g.q());
    Ok(())
}

fn print_report(rep: &PdaReport, kind: &str) {
    let reg = match rep.regularity {
        Regularity::Regular(g) => format!(" {g}-regular"),
        Regularity::Irregular => String::new(),
    };
    println!("{} {kind}{reg}", rep.params);
    for v in &rep.violations {
        println!("violation {v}");
    }
}

fn verify_array(text: &str, path: &str) -> Result<()> {
    let f = in_file(path, parse_pda(text))?;
    let rep = match &f.phi {
        Some(phi) => verify_dpda(&f.array, phi),
        None => verify_pda(&f.array),
    };
    print_report(&rep, if f.phi.is_some() { "DPDA" } else { "PDA" });
    if !rep.is_valid() {
        bail!(CheckFailed(format!("{} violations", rep.violations.len())));
    }
    if f.phi.is_none() {
        match find_phi(&f.array) {
            Some(phi) => {
                let s: Vec<String> = phi.as_slice().iter().map(|c| (c + 1).to_string()).collect();
                println!("senders {}", s.join(","));
            }
            None => println!("no sender map"),
        }
    }
    Ok(())
}

fn build_scheme(a: &SchemeArgs) -> Result<SchemeBundle> {
    Ok(match a.kind {
        SchemeKind::Tdesign | SchemeKind::TdesignWide => {
            let (d, _) = load_design(need(a.design.as_deref(), "design")?)?;
            let t = match a.t {
                Some(t) => t,
                None => d.strength().ok_or_else(|| CheckFailed("design has no uniform strength".into()))?.0,
            };
            let variant =
                if a.kind == SchemeKind::Tdesign { TdesignVariant::Standard } else { TdesignVariant::Wide };
            tdesign_scheme(&d, t, need(a.i, "i")?, variant)?
        }
        SchemeKind::Tgdd => {
            let gdd = match &a.gdd {
                Some(g) => load_gdd(g)?,
                None => trivial_gdd(need(a.m, "m")?, need(a.q, "q")?, need(a.t, "t")?)?,
            };
            let oa = match &a.oa {
                Some(o) => load_oa(o)?,
                None => {
                    let (m, q) = (gdd.m() as usize, gdd.q());
                    match a.s {
                        Some(s) if s + 1 != m => reed_solomon_oa(q, m, s)?,
                        _ => proper_oa(q, m)?,
                    }
                }
            };
            tgdd_scheme(&gdd, &oa, a.l.unwrap_or(1))?
        }
        SchemeKind::OaUsers => oa_user_scheme(need(a.m, "m")?, need(a.q, "q")?, need(a.t, "t")?)?,
        SchemeKind::TrivialGdd => trivial_gdd_scheme(need(a.m, "m")?, need(a.q, "q")?, need(a.t, "t")?)?,
        SchemeKind::Complete => {
            let family = match need(a.family, "family")? {
                FamilyArg::I => Family::I,
                FamilyArg::J => Family::J,
            };
            complete_family_scheme(need(a.n, "n")?, need(a.k, "k")?, family, need(a.idx, "idx")?, a.as_printed)?
        }
    })
}

fn scheme(a: SchemeArgs) -> Result<()> {
    let b = build_scheme(&a)?;
    let rep = verify_dpda(&b.delivery, &b.phi);
    if !rep.is_valid() {
        print_report(&rep, "DPDA");
        bail!(CheckFailed(format!("constructed array has {} violations", rep.violations.len())));
    }
    b.check_consistency()?;
    println!("{}", b.metrics);
    if let Some(dir) = &a.out {
        write_bundle(dir, &b).with_context(|| format!("cannot write bundle to {}", dir.display()))?;
        info!("bundle written to {}", dir.display());
    }
    Ok(())
}

fn parse_demand(s: &str) -> Result<DemandMode> {
    Ok(match s {
        "worst" => DemandMode::Worst,
        "random" => DemandMode::Random,
        list => DemandMode::Fixed(
            list.split(',')
                .map(|x| x.trim().parse().map_err(|_| Error::InvalidParameters(format!("bad demand `{list}`"))))
                .collect::<Result<_, _>>()?,
        ),
    })
}

fn simulate(a: SimulateArgs) -> Result<()> {
    let path = Path::new(&a.bundle);
    let bundle = if path.is_dir() {
        read_bundle(path).with_context(|| format!("in bundle {}", path.display()))?
    } else if a.bundle == "four-user" {
        let (arr, phi) = fixtures::four_user_dpda();
        SchemeBundle::dedicated(arr, phi)?
    } else {
        bail!(Error::InvalidParameters(format!("no bundle directory {}", a.bundle)));
    };
    let cfg = ExperimentConfig {
        n_files: a.n_files.unwrap_or(bundle.delivery.cols()),
        file_len: a.file_len,
        demand: parse_demand(&a.demand)?,
        seed: a.seed,
    };
    let rep = run_experiment(&bundle, &cfg).map_err(|e| match e {
        Error::InvalidParameters(_) | Error::OutOfRange(_) => anyhow!(e),
        other => anyhow!(Undecodable(other)),
    })?;
    emit(a.out.as_ref(), &rep.to_text(a.transmissions))
}

fn set_jobs(out: &Output) -> Result<()> {
    if let Some(n) = out.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("cannot start worker threads")?;
    }
    Ok(())
}

fn print_rows(rows: &[ComparisonRow], out: &Output) {
    if out.csv {
        print!("{}", render_csv(rows));
    } else {
        print!("{}", render_text(rows));
    }
}

fn report_checks(checks: &[RowCheck]) -> Result<()> {
    let mut failed = 0;
    for c in checks {
        if c.passed() {
            println!("check {}: PASS", c.expected.scheme);
        } else {
            failed += 1;
            println!(
                "check {}: FAIL expected M/N={} F={} R={} measured M/N={} F={} R={}",
                c.expected.scheme,
                fmt_ratio(&c.expected.memory_ratio),
                c.expected.f,
                fmt_ratio(&c.expected.load),
                fmt_ratio(&c.measured.memory_ratio),
                c.measured.f,
                fmt_ratio(&c.measured.load),
            );
        }
    }
    if failed > 0 {
        bail!(CheckFailed(format!("{failed} of {} rows differ from the constructions", checks.len())));
    }
    Ok(())
}

fn compare(cmd: CompareCmd) -> Result<()> {
    match cmd {
        CompareCmd::Tdesign { design, r, out } => {
            let (d, _) = load_design(&design)?;
            let k = d.block_size().ok_or_else(|| CheckFailed("blocks have different sizes".into()))?;
            let (t, lambda) = d.strength().ok_or_else(|| CheckFailed("design has no uniform strength".into()))?;
            if lambda != 1 {
                bail!(Error::InvalidParameters(format!("the table needs λ = 1, design has λ = {lambda}")));
            }
            let rows = tdesign_table(d.v() as u64, k as u64, t as u64, r)?;
            print_rows(&rows, &out);
            if out.check {
                let b = tdesign_scheme(&d, t, 1, TdesignVariant::Standard)?;
                let measured = ComparisonRow::from_metrics(rows[0].scheme.clone(), &b.metrics);
                report_checks(&[RowCheck { expected: rows[0].clone(), measured }])?;
            }
            Ok(())
        }
        CompareCmd::Tgdd { m, q, t, r, out } => {
            let rows = tgdd_table(m, q, t, r)?;
            print_rows(&rows, &out);
            if out.check {
                let (m, q, t) = (m as usize, q as usize, t as usize);
                let b = tgdd_scheme(&trivial_gdd(m, q, t)?, &proper_oa(q as u32, m)?, 1)?;
                let measured = ComparisonRow::from_metrics(rows[0].scheme.clone(), &b.metrics);
                report_checks(&[RowCheck { expected: rows[0].clone(), measured }])?;
            }
            Ok(())
        }
        CompareCmd::Complete { n, k, as_printed, out } => {
            set_jobs(&out)?;
            let members = complete_members(n, k, as_printed);
            if members.is_empty() {
                bail!(Error::InvalidParameters(format!("no family member exists for n={n} k={k}")));
            }
            let checks: Vec<RowCheck> = members
                .par_iter()
                .map(|&(family, idx)| complete_row(n, k, family, idx, as_printed))
                .collect::<Result<_, _>>()?;
            let rows: Vec<ComparisonRow> = checks.iter().map(|c| c.expected.clone()).collect();
            print_rows(&rows, &out);
            if out.check {
                report_checks(&checks)?;
            }
            Ok(())
        }
        CompareCmd::Summary { design, i, m, q, t, n, k, idx, out } => {
            let mut p = SummaryParams::default();
            if let Some(name) = design {
                p.design = Some((load_design(&name)?.0, i));
            }
            if let (Some(m), Some(q), Some(t)) = (m, q, t) {
                p.grouped = Some((m, q, t));
            }
            if let (Some(n), Some(k), Some(idx)) = (n, k, idx) {
                p.complete = Some((n, k, idx));
            }
            if p.design.is_none() && p.grouped.is_none() && p.complete.is_none() {
                bail!(Error::InvalidParameters("give --design, --m/--q/--t or --n/--k/--idx".into()));
            }
            print_rows(&summary_table(&p)?, &out);
            if out.check {
                report_checks(&summary_checks(&p)?)?;
            }
            Ok(())
        }
        CompareCmd::MemoryShare { n_files, k, points, design, jcm, vertices, subpacketization } => {
            let mut pts = Vec::new();
            for tok in points.iter().flat_map(|s| s.split(',')).filter(|s| !s.trim().is_empty()) {
                let bad = || Error::InvalidParameters(format!("bad point `{tok}`, expected M:R"));
                let (m, r) = tok.split_once(':').ok_or_else(bad)?;
                pts.push(MemoryLoadPoint::new(parse_ratio(m).ok_or_else(bad)?, parse_ratio(r).ok_or_else(bad)?));
            }
            let mut schemes = Vec::new();
            if let Some(name) = design {
                schemes.extend(design_points(&load_design(&name)?.0, n_files)?);
            }
            if jcm {
                schemes.extend(jcm_points(n_files, k));
            }
            if subpacketization {
                print!("{}", render_subpacketization_csv(&schemes));
                return Ok(());
            }
            pts.extend(schemes.iter().map(|s| s.point));
            let env = memory_share(&pts, n_files, k)?;
            let shown = if vertices { env.vertices().to_vec() } else { env.sample() };
            print!("{}", render_load_csv(&shown));
            Ok(())
        }
    }
}
