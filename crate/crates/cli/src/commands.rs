use std::fs::File;
use std::path::Path;

use exuberance::bootstrap::{
    bootstrap_union, composite_monitor_cv, subsampling_cv, wild_bootstrap_pvalue, BootstrapReport,
};
use exuberance::datestamp::{
    bic_init, default_min_duration, default_n_min, psy_stamp, pwy_stamp, select_model_bic,
    sign_stamp_with, training_max_monitor, two_step_stamp, psy_monitor, CvSource,
};
use exuberance::inference::{
    cauchy_ci, cobubble_test, contagion_delay, migration_test, recursive_coefficients,
    rolling_coefficients, t_ci, CoefSequence,
};
use exuberance::recursive::{adf_sequence, bsadf_sequence, end_of_sample_stats};
use exuberance::series::min_window_len;
use exuberance::sim::{simulate_cv_sequence, size_power_study, tabulate_critical_values};
use exuberance::{
    compute, load_series, AdfConfig, CvSequence, CvTable, Episode, Series, StatConfig, StatKind,
    StatSequence,
};
use serde_json::{json, Value};

use crate::args::*;
use crate::error::CliError;
use crate::report::PlotData;

type Result<T> = std::result::Result<T, CliError>;

/// Output of one run before it is wrapped in a report.
pub struct Outcome {
    pub result: Value,
    pub plot: Option<PlotData>,
    pub warnings: Vec<String>,
    /// One-line human summary for stderr.
    pub summary: String,
}

pub fn run(cmd: &Command, seed: u64) -> Result<Outcome> {
    match cmd {
        Command::Test(a) => run_test(a, seed),
        Command::Datestamp(a) => run_datestamp(a, seed),
        Command::Monitor(a) => run_monitor(a, seed),
        Command::SimulateCv(a) => run_simulate_cv(a, seed),
        Command::Study(a) => run_study(a, seed),
        Command::Relate(a) => run_relate(a, seed),
        Command::PlotData(_) => Err(CliError::Usage("plot-data does not produce a report".into())),
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

fn check_level(level: f64) -> Result<()> {
    if level > 0.0 && level < 1.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--level {level} outside (0, 1)")))
    }
}

fn load(data: &DataArgs) -> Result<Series> {
    Ok(load_series(&data.input, &data.column)?)
}

fn stat_config(data: &DataArgs) -> StatConfig {
    StatConfig {
        tau0: data.tau0,
        adf: adf_config(data),
        ..StatConfig::default()
    }
}

fn adf_config(data: &DataArgs) -> AdfConfig {
    AdfConfig {
        det: data.det,
        k: data.k,
    }
}

fn labels(series: &Series) -> Option<Vec<String>> {
    series.labels().map(<[String]>::to_vec)
}

fn read_table(path: &Path) -> Result<CvTable> {
    CvTable::read_json(path).map_err(|e| CliError::Usage(format!("cannot use critical value table: {e}")))
}

fn table_value(table: &CvTable, kind: StatKind, t: usize, tau0: f64, cfg: &StatConfig, prob: f64) -> Result<f64> {
    table
        .lookup(kind, t, tau0, cfg.adf.det, cfg.adf.k, prob)
        .ok_or_else(|| {
            CliError::Usage(format!(
                "table has no entry for {kind} at T = {t}, tau0 = {tau0}, det = {}, k = {}, prob = {prob}",
                cfg.adf.det, cfg.adf.k
            ))
        })
}

fn dump_replicates(path: &Path, rep: &BootstrapReport) -> Result<()> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut w = csv::Writer::from_writer(file);
    let data = |e: csv::Error| CliError::Data(e.to_string());
    w.write_record(["replicate", "statistic"]).map_err(data)?;
    for (i, v) in rep.replicates.iter().enumerate() {
        w.write_record([(i + 1).to_string(), v.to_string()]).map_err(data)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

fn run_test(a: &TestArgs, seed: u64) -> Result<Outcome> {
    check_level(a.level)?;
    let series = load(&a.data)?;
    let t = series.len();
    let tau0 = a.data.tau0.resolve(t)?;
    let cfg = stat_config(&a.data);
    match a.stat {
        TestStat::Kind(kind) => test_kind(a, kind, &series, tau0, &cfg, seed),
        TestStat::Union => {
            if a.cv != CvChoice::Bootstrap {
                return Err(CliError::Usage("a union test is calibrated by the bootstrap; use --cv bootstrap".into()));
            }
            let members: Vec<(StatKind, StatConfig)> = a.members.iter().map(|&k| (k, cfg)).collect();
            let u = bootstrap_union(&series, &members, a.boot.b, a.level, a.boot.multiplier, seed)?;
            let summary = format!(
                "union of {}: u = {:.4}, threshold = {:.4}, {}",
                a.members.iter().map(|k| k.as_str()).collect::<Vec<_>>().join("+"),
                u.decision.u,
                u.decision.threshold,
                if u.decision.reject { "reject" } else { "no rejection" }
            );
            Ok(Outcome {
                result: json!({ "stat": "union", "T": t, "tau0": tau0, "level": a.level, "union": u }),
                plot: None,
                warnings: vec![],
                summary,
            })
        }
        TestStat::EndSample => {
            if a.cv != CvChoice::Bootstrap && a.cv != CvChoice::Simulated {
                return Err(CliError::Usage(
                    "the end-of-sample test uses subsampling critical values; omit --cv".into(),
                ));
            }
            if t < a.m + 2 {
                return Err(CliError::Data(format!("T = {t} leaves no training span for m = {}", a.m)));
            }
            // last m differences are monitored; everything before trains
            let j = t - 1 - a.m;
            let stats = end_of_sample_stats(&series, a.m, j)?;
            let sub = subsampling_cv(&series.window(0, j + 1)?, a.m, 1.0 - a.level)?;
            let reject_s = stats.s > sub.cv_s;
            let reject_r = stats.r > sub.cv_r;
            let reject_sw = match (stats.s_w, sub.cv_sw) {
                (Some(s), Some(c)) => Some(s > c),
                _ => None,
            };
            let reject = reject_sw.unwrap_or(reject_s);
            let warnings = sub.warning.iter().cloned().collect();
            Ok(Outcome {
                result: json!({
                    "stat": "end-sample", "T": t, "m": a.m, "level": a.level,
                    "statistics": stats, "critical_values": sub,
                    "reject_s": reject_s, "reject_r": reject_r, "reject_sw": reject_sw, "reject": reject,
                }),
                plot: None,
                warnings,
                summary: format!(
                    "end-sample (m = {}): S = {:.4}, {}",
                    a.m,
                    stats.s,
                    if reject { "reject" } else { "no rejection" }
                ),
            })
        }
    }
}

fn test_kind(a: &TestArgs, kind: StatKind, series: &Series, tau0: f64, cfg: &StatConfig, seed: u64) -> Result<Outcome> {
    cfg.validate(kind)?;
    let t = series.len();
    let prob = 1.0 - a.level;
    let sup = compute(kind, series, cfg)?;
    let mut warnings = Vec::new();
    let (cv, p_value, bootstrap) = match &a.cv {
        CvChoice::Bootstrap => {
            let rep = wild_bootstrap_pvalue(series, kind, cfg, a.boot.b, a.boot.multiplier, seed)?;
            if let Some(p) = &a.dump_replicates {
                dump_replicates(p, &rep)?;
            }
            let info = json!({ "B": rep.b, "failed": rep.failed, "multiplier": rep.multiplier });
            (rep.critical_value(a.level), Some(rep.p_value), Some(info))
        }
        CvChoice::Simulated => {
            let table = tabulate_critical_values(kind, &[t], cfg, &[prob], a.reps, seed)?;
            warnings.extend(table.meta.warning.clone());
            (table_value(&table, kind, t, tau0, cfg, prob)?, None, None)
        }
        CvChoice::Table(path) => (table_value(&read_table(path)?, kind, t, tau0, cfg, prob)?, None, None),
        CvChoice::Rule => {
            return Err(CliError::Usage(
                "the rule critical value applies to date-stamping sequences; use bootstrap, simulated or table:<path>".into(),
            ))
        }
    };
    let reject = sup.value > cv;
    let plot = sup.sequence.as_ref().map(|seq| PlotData {
        t,
        labels: labels(series),
        cv: Some(vec![cv; seq.len()]),
        sequence: Some(seq.clone()),
        episodes: vec![],
    });
    let summary = format!(
        "{kind} = {:.4}, cv = {:.4}{}: {}",
        sup.value,
        cv,
        p_value.map(|p| format!(", p = {p:.4}")).unwrap_or_default(),
        if reject { "reject" } else { "no rejection" }
    );
    Ok(Outcome {
        result: json!({
            "stat": kind, "T": t, "tau0": tau0, "value": sup.value,
            "argmax": sup.argmax, "argmax_index": sup.argmax_index, "skipped": sup.skipped,
            "level": a.level, "cv": cv, "cv_source": a.cv, "p_value": p_value,
            "bootstrap": bootstrap, "reject": reject,
        }),
        plot,
        warnings,
        summary,
    })
}

/// Critical value sequence for a PWY or PSY pass.
fn stamp_cv(a: &DatestampArgs, kind: StatKind, seq: &StatSequence, series: &Series, tau0: f64, seed: u64) -> Result<CvSequence> {
    let t = series.len();
    let cfg = stat_config(&a.data);
    let prob = 1.0 - a.level;
    Ok(match &a.cv {
        CvChoice::Rule => CvSequence::rule(seq),
        CvChoice::Simulated => {
            let sim = simulate_cv_sequence(kind, t, &cfg, prob, a.reps, seed)?;
            if sim.values.len() != seq.len() {
                return Err(CliError::Data("simulated critical values do not align with the sequence".into()));
            }
            sim
        }
        CvChoice::Table(path) => {
            let v = table_value(&read_table(path)?, kind, t, tau0, &cfg, prob)?;
            CvSequence::constant(v, seq.len(), CvSource::Table)
        }
        CvChoice::Bootstrap if kind == StatKind::Gsadf => {
            let c = composite_monitor_cv(series, tau0, a.tb, a.boot.b, a.level, a.boot.multiplier, seed, cfg.adf)?;
            CvSequence::constant(c.cv, seq.len(), CvSource::Bootstrap)
        }
        CvChoice::Bootstrap => {
            let rep = wild_bootstrap_pvalue(series, kind, &cfg, a.boot.b, a.boot.multiplier, seed)?;
            CvSequence::constant(rep.critical_value(a.level), seq.len(), CvSource::Bootstrap)
        }
    })
}

fn annotate(a: &DatestampArgs, series: &Series, episodes: &[Episode]) -> Vec<Value> {
    episodes
        .iter()
        .map(|e| {
            let mut v = serde_json::Map::new();
            if a.bic_init {
                let o = e.origin_index;
                v.insert(
                    "initial_condition".into(),
                    match bic_init(series, o, default_n_min(o)) {
                        Ok(b) => to_json(&b),
                        Err(err) => json!({ "error": err.to_string() }),
                    },
                );
            }
            if let Some(level) = a.ci {
                let seg = series.window(e.origin_index.saturating_sub(1), e.collapse_index.min(series.len()));
                let ci = |f: &dyn Fn(&Series) -> exuberance::Result<exuberance::MildlyExplosiveCI>| match &seg {
                    Ok(s) => match f(s) {
                        Ok(c) => to_json(&c),
                        Err(err) => json!({ "error": err.to_string() }),
                    },
                    Err(err) => json!({ "error": err.to_string() }),
                };
                v.insert("cauchy_ci".into(), ci(&|s| cauchy_ci(s, level)));
                v.insert("t_ci".into(), ci(&|s| t_ci(s, a.data.det, level)));
            }
            Value::Object(v)
        })
        .collect()
}

fn run_datestamp(a: &DatestampArgs, seed: u64) -> Result<Outcome> {
    check_level(a.level)?;
    if let Some(l) = a.ci {
        check_level(l)?;
    }
    let series = load(&a.data)?;
    let t = series.len();
    let tau0 = a.data.tau0.resolve(t)?;
    let adf = adf_config(&a.data);
    let min_duration = default_min_duration(t, a.delta);
    let mut extra = serde_json::Map::new();
    let (episodes, sequence, cv) = match a.method {
        StampMethod::Pwy | StampMethod::Psy => {
            let (kind, seq) = if a.method == StampMethod::Pwy {
                (StatKind::Sadf, adf_sequence(&series, tau0, adf)?)
            } else {
                (StatKind::Gsadf, bsadf_sequence(&series, tau0, adf)?)
            };
            let cv = stamp_cv(a, kind, &seq, &series, tau0, seed)?;
            let episodes = if a.method == StampMethod::Pwy {
                pwy_stamp(&seq, &cv, min_duration)?
            } else {
                psy_stamp(&seq, &cv, min_duration)?
            };
            extra.insert("cv_source".into(), to_json(&cv.source));
            (episodes, Some(seq), Some(cv.values))
        }
        StampMethod::TwoStep => (two_step_stamp(&series, tau0, adf)?, None, None),
        StampMethod::Sign => {
            let s = sign_stamp_with(&series, tau0, a.epsilon)?;
            extra.insert("value".into(), json!(s.value));
            extra.insert("epsilon".into(), json!(s.epsilon));
            extra.insert("skipped".into(), json!(s.skipped));
            (vec![s.episode], None, None)
        }
        StampMethod::SsrBic => {
            let sel = select_model_bic(&series, a.min_seg)?;
            extra.insert("model".into(), to_json(&sel.model));
            extra.insert("candidates".into(), to_json(&sel.candidates));
            (vec![sel.episode], None, None)
        }
    };
    let mut result = json!({
        "method": a.method, "T": t, "tau0": tau0, "min_duration": min_duration,
        "episodes": episodes,
    });
    let obj = result.as_object_mut().expect("object");
    obj.extend(extra);
    if a.bic_init || a.ci.is_some() {
        obj.insert("annotations".into(), Value::Array(annotate(a, &series, &episodes)));
    }
    let summary = format!(
        "{} episode(s): {}",
        episodes.len(),
        episodes
            .iter()
            .map(|e| format!("{}-{}{}", e.origin_index, e.collapse_index, if e.ongoing { " (ongoing)" } else { "" }))
            .collect::<Vec<_>>()
            .join(", ")
    );
    Ok(Outcome {
        result,
        plot: Some(PlotData {
            t,
            labels: labels(&series),
            sequence,
            cv,
            episodes,
        }),
        warnings: vec![],
        summary,
    })
}

fn run_monitor(a: &MonitorArgs, seed: u64) -> Result<Outcome> {
    check_level(a.level)?;
    let series = load(&a.data)?;
    let t = series.len();
    let tau0 = a.data.tau0.resolve(t)?;
    let adf = adf_config(&a.data);
    match a.method {
        MonitorMethod::Composite => {
            let r = psy_monitor(&series, tau0, a.tb, a.boot.b, a.level, a.boot.multiplier, seed, adf)?;
            let summary = match r.first_alarm {
                Some(i) => format!("first alarm at {i} (cv = {:.4})", r.composite.cv),
                None => format!("no alarm (cv = {:.4})", r.composite.cv),
            };
            let plot = PlotData {
                t,
                labels: labels(&series),
                cv: Some(vec![r.composite.cv; r.bsadf.len()]),
                sequence: Some(r.bsadf.clone()),
                episodes: r.episodes.clone(),
            };
            Ok(Outcome {
                result: json!({
                    "method": a.method, "T": t, "tau0": tau0, "Tb": a.tb, "level": a.level,
                    "cv": r.composite.cv, "B": r.composite.b, "failed": r.composite.failed,
                    "alarms": r.alarms, "first_alarm": r.first_alarm, "episodes": r.episodes,
                }),
                plot: Some(plot),
                warnings: vec![],
                summary,
            })
        }
        MonitorMethod::TrainingMax => {
            let train = a.train.ok_or_else(|| CliError::Usage("--train is required for training-max".into()))?;
            let seq = bsadf_sequence(&series, tau0, adf)?;
            let split = |pred: &dyn Fn(usize) -> bool| StatSequence {
                entries: seq.entries.iter().filter(|e| pred(e.index)).cloned().collect(),
                ..seq.clone()
            };
            let training = split(&|i| i <= train);
            let monitor = split(&|i| i > train);
            if monitor.is_empty() {
                return Err(CliError::Usage(format!("--train {train} leaves nothing to monitor")));
            }
            let first = training_max_monitor(&training, &monitor)?.map(|p| monitor.entries[p].index);
            let threshold = training.max();
            let summary = match first {
                Some(i) => format!("first alarm at {i}"),
                None => "no alarm".to_string(),
            };
            let plot = PlotData {
                t,
                labels: labels(&series),
                cv: threshold.map(|c| vec![c; seq.len()]),
                sequence: Some(seq),
                episodes: vec![],
            };
            Ok(Outcome {
                result: json!({
                    "method": a.method, "T": t, "tau0": tau0, "train": train,
                    "threshold": threshold, "first_alarm": first,
                }),
                plot: Some(plot),
                warnings: vec![],
                summary,
            })
        }
    }
}

fn run_simulate_cv(a: &SimulateCvArgs, seed: u64) -> Result<Outcome> {
    let cfg = StatConfig {
        tau0: a.tau0,
        adf: AdfConfig { det: a.det, k: a.k },
        ..StatConfig::default()
    };
    let table = tabulate_critical_values(a.stat, &a.ts, &cfg, &a.probs, a.reps, seed)?;
    if let Some(p) = &a.table {
        table.write_json(p)?;
    }
    if let Some(p) = &a.csv {
        let f = File::create(p).map_err(|e| CliError::io(p, e))?;
        table.write_csv(f)?;
    }
    Ok(Outcome {
        summary: format!("{} records for {} over T = {:?}", table.records.len(), a.stat, a.ts),
        warnings: table.meta.warning.iter().cloned().collect(),
        result: to_json(&table),
        plot: None,
    })
}

fn run_study(a: &StudyArgs, seed: u64) -> Result<Outcome> {
    let spec = a
        .spec
        .as_ref()
        .ok_or_else(|| CliError::Usage("study needs --spec".into()))?;
    check_level(spec.level)?;
    let r = size_power_study(&spec.test, &spec.null, &spec.alt, spec.replications, spec.level, seed)?;
    Ok(Outcome {
        summary: format!(
            "size {:.4} (se {:.4}), power {:.4} (se {:.4})",
            r.size.rate, r.size.se, r.power.rate, r.power.se
        ),
        result: to_json(&r),
        plot: None,
        warnings: vec![],
    })
}

fn peak(seq: &CoefSequence, given: Option<usize>, what: &str) -> Result<usize> {
    given
        .or_else(|| seq.peak_index())
        .ok_or_else(|| CliError::Data(format!("no coefficients to locate the {what} peak")))
}

fn run_relate(a: &RelateArgs, seed: u64) -> Result<Outcome> {
    let x = load_series(&a.input, &a.column)?;
    let y = load_series(&a.input_y, &a.column_y)?;
    let adf = AdfConfig { det: a.det, k: a.k };
    let w0 = |s: &Series| -> Result<usize> { Ok(min_window_len(a.tau0.resolve(s.len())?, s.len())?) };
    let (result, summary) = match a.method {
        RelateMethod::Migration => {
            let tx = recursive_coefficients(&x, w0(&x)?, adf)?;
            let ty = recursive_coefficients(&y, w0(&y)?, adf)?;
            let (px, py) = (peak(&tx, a.tpx, "first")?, peak(&ty, a.tpy, "second")?);
            let r = migration_test(&tx, &ty, px, py, a.a)?;
            let s = format!("migration: Z = {:.4}, p = {:.4}", r.z_beta, r.p_value);
            (json!({ "method": a.method, "t_px": px, "t_py": py, "migration": r }), s)
        }
        RelateMethod::Contagion => {
            let window = match a.window {
                Some(w) => w,
                None => w0(&x)?,
            };
            let core = rolling_coefficients(&x, window, adf)?;
            let target = rolling_coefficients(&y, window, adf)?;
            let r = contagion_delay(&core, &target, 0..=a.max_delay)?;
            let s = format!("contagion: delay {} (R2 = {:.4})", r.d_hat, r.r2);
            (json!({ "method": a.method, "window": window, "contagion": r }), s)
        }
        RelateMethod::Cobubble => {
            let r = cobubble_test(&y, &x, a.delay, a.boot.b, a.boot.multiplier, seed)?;
            let s = format!("co-bubble: S = {:.4}, p = {:.4}", r.s, r.p_value);
            (json!({ "method": a.method, "cobubble": r }), s)
        }
    };
    Ok(Outcome {
        result,
        plot: None,
        warnings: vec![],
        summary,
    })
}
