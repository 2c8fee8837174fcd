//! Problems: generation, datasets, and scoring.
//!
//! The built-in generator produces the six-operand arithmetic family
//! `a+b*c+d-e*f` with operands drawn uniformly from 0..=99. External
//! datasets load from JSONL files, one problem object per line.

pub mod prompts;

use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::core::{normalize, TaskKind};
use crate::error::{Error, Result};
use crate::orchestrator::DebateResult;

pub use prompts::{render, PromptSet};

/// One problem instance. `answer` holds the ground truth in canonical text
/// form (a number, or a choice letter for multiple-choice tasks).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Problem {
    pub id: String,
    pub task: TaskKind,
    pub question: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub choices: Option<[String; 4]>,
    pub answer: String,
}

/// Build the expression string and ground truth for one set of operands.
pub fn arithmetic_from_operands(ops: [i64; 6]) -> (String, i64) {
    let [a, b, c, d, e, f] = ops;
    let question = format!("{a}+{b}*{c}+{d}-{e}*{f}");
    let truth = a + b * c + d - e * f;
    (question, truth)
}

/// Generate `count` arithmetic problems from `seed`. Problem ids encode the
/// seed and index, so regenerated datasets are stable and self-describing.
pub fn gen_arithmetic(count: usize, seed: u64) -> Vec<Problem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|idx| {
            let ops = [(); 6].map(|_| rng.gen_range(0..=99i64));
            let (question, truth) = arithmetic_from_operands(ops);
            Problem {
                id: format!("arith-{seed}-{idx:04}"),
                task: TaskKind::Arithmetic,
                question,
                choices: None,
                answer: truth.to_string(),
            }
        })
        .collect()
}

/// One JSONL dataset line. The task is implied by the caller; a line may
/// also state it explicitly (as written files do), in which case it must
/// match.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DatasetRecord {
    id: String,
    #[serde(default)]
    task: Option<TaskKind>,
    question: String,
    #[serde(default)]
    choices: Option<[String; 4]>,
    answer: String,
}

/// Load a JSONL dataset for `task`: one problem object per line with fields
/// `id`, `question`, `answer`, and (for multiple-choice) `choices`. Blank
/// lines are skipped; an empty file is an empty dataset.
pub fn load_dataset(path: impl AsRef<Path>, task: TaskKind) -> Result<Vec<Problem>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
    let mut problems = Vec::new();
    let mut seen = BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let line_no = idx + 1;
        let record: DatasetRecord = serde_json::from_str(line).map_err(|e| Error::Dataset {
            path: path.display().to_string(),
            line: line_no,
            message: e.to_string(),
        })?;
        let fail = |message: String| Error::Dataset {
            path: path.display().to_string(),
            line: line_no,
            message,
        };
        if record.id.is_empty() {
            return Err(fail("problem id must not be empty".to_string()));
        }
        if record.answer.trim().is_empty() {
            return Err(fail(format!("problem {} has an empty answer", record.id)));
        }
        if let Some(stated) = record.task {
            if stated != task {
                return Err(fail(format!(
                    "problem {} states task {stated} but the dataset is loaded as {task}",
                    record.id
                )));
            }
        }
        if task == TaskKind::Mmlu && record.choices.is_none() {
            return Err(fail(format!(
                "problem {} is multiple-choice but lists no choices",
                record.id
            )));
        }
        if let Some(previous) = seen.insert(record.id.clone(), line_no) {
            return Err(fail(format!(
                "duplicate problem id {} (first seen on line {previous})",
                record.id
            )));
        }
        problems.push(Problem {
            id: record.id,
            task,
            question: record.question,
            choices: record.choices,
            answer: record.answer,
        });
    }
    Ok(problems)
}

/// Write problems to a JSONL file, one object per line.
pub fn write_dataset(path: impl AsRef<Path>, problems: &[Problem]) -> Result<()> {
    let path = path.as_ref();
    let mut out = Vec::new();
    for problem in problems {
        serde_json::to_writer(&mut out, problem)
            .map_err(|e| Error::config(format!("serializing problem {}: {e}", problem.id)))?;
        out.push(b'\n');
    }
    let mut file = std::fs::File::create(path).map_err(|e| Error::file(path, e))?;
    file.write_all(&out).map_err(|e| Error::file(path, e))?;
    Ok(())
}

/// Whether a debate's voted answer matches the problem's ground truth, after
/// canonicalizing both sides the same way.
pub fn is_correct(problem: &Problem, result: &DebateResult) -> bool {
    result.final_answer.value == normalize(problem.task, &problem.answer)
}

/// Fraction of results whose voted answer is correct. Results align to
/// problems by id; a result without a matching problem is an error.
pub fn score_run(problems: &[Problem], results: &[DebateResult]) -> Result<f64> {
    if results.is_empty() {
        return Err(Error::Score("cannot score an empty result set".to_string()));
    }
    let by_id: BTreeMap<&str, &Problem> =
        problems.iter().map(|p| (p.id.as_str(), p)).collect();
    let mut correct = 0usize;
    for result in results {
        let problem = by_id.get(result.problem_id.as_str()).ok_or_else(|| {
            Error::Score(format!(
                "result references problem id {} which is not in the dataset",
                result.problem_id
            ))
        })?;
        if is_correct(problem, result) {
            correct += 1;
        }
    }
    Ok(correct as f64 / results.len() as f64)
}
