use std::collections::BTreeMap;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::repo::RepoRecord;
use crate::error::{Error, Result};

pub const DEFAULT_KEYWORDS: &[&str] = &["CGO", "C GO"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum IssueKind {
    Issue,
    Commit,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IssueRecord {
    pub repo: String,
    /// Issue number or commit SHA.
    pub issue_id: String,
    pub title: String,
    pub body: String,
    pub url: String,
    pub matched_keyword: String,
    pub kind: IssueKind,
}

/// One remote query: a keyword restricted to one repository and one kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchQuery {
    pub repo: String,
    pub keyword: String,
    pub kind: IssueKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawHit {
    pub id: String,
    pub title: String,
    pub body: String,
    pub url: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SearchPage {
    pub items: Vec<RawHit>,
    pub has_more: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ApiError {
    RateLimited { retry_after: Option<Duration> },
    Auth(String),
    Other(String),
}

/// A hosting-platform search endpoint. Pages are 1-based.
pub trait SearchApi {
    fn search_page(
        &mut self,
        query: &SearchQuery,
        page: u32,
        per_page: u32,
    ) -> std::result::Result<SearchPage, ApiError>;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RetryPolicy {
    pub max_retries: u32,
    pub base_delay: Duration,
    pub max_delay: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy { max_retries: 5, base_delay: Duration::from_secs(2), max_delay: Duration::from_secs(120) }
    }
}

impl RetryPolicy {
    fn delay(&self, attempt: u32, hint: Option<Duration>) -> Duration {
        let exp = self.base_delay.saturating_mul(2u32.saturating_pow(attempt));
        hint.unwrap_or(exp).min(self.max_delay)
    }
}

pub struct SearchOptions<'a> {
    pub per_page: u32,
    pub kinds: Vec<IssueKind>,
    pub retry: RetryPolicy,
    /// Called instead of blocking the thread directly, so tests can skip waits.
    pub sleep: &'a dyn Fn(Duration),
}

impl Default for SearchOptions<'_> {
    fn default() -> Self {
        SearchOptions {
            per_page: 100,
            kinds: vec![IssueKind::Issue, IssueKind::Commit],
            retry: RetryPolicy::default(),
            sleep: &std::thread::sleep,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub records: Vec<IssueRecord>,
    /// Some query gave up after exhausting its retries or hitting an error.
    pub incomplete: bool,
    /// Why each abandoned query stopped.
    pub failures: Vec<String>,
}

fn normalize(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

/// First keyword occurring in `text`, compared case-insensitively on whitespace-normalized text.
pub fn local_keyword_match<'k>(text: &str, keywords: &'k [String]) -> Option<&'k str> {
    let hay = normalize(text);
    keywords.iter().find(|k| !k.trim().is_empty() && hay.contains(&normalize(k))).map(String::as_str)
}

/// Exhaustively pages through every keyword/kind query for one repository.
pub fn search_cgo_issues(
    repo: &RepoRecord,
    keywords: &[String],
    api: &mut dyn SearchApi,
    options: &SearchOptions<'_>,
) -> Result<SearchOutcome> {
    let per_page = options.per_page.max(1);
    let mut found: BTreeMap<String, IssueRecord> = BTreeMap::new();
    let mut failures = Vec::new();
    for &kind in &options.kinds {
        for keyword in keywords {
            let query = SearchQuery { repo: repo.name.clone(), keyword: keyword.clone(), kind };
            let mut page = 1;
            let mut attempt = 0;
            loop {
                match api.search_page(&query, page, per_page) {
                    Ok(result) => {
                        attempt = 0;
                        for hit in result.items {
                            let text = format!("{}\n{}", hit.title, hit.body);
                            let matched = local_keyword_match(&text, keywords).unwrap_or(keyword).to_string();
                            let key = hit.id.clone();
                            found.entry(key).or_insert(IssueRecord {
                                repo: repo.name.clone(),
                                issue_id: hit.id,
                                title: hit.title,
                                body: hit.body,
                                url: hit.url,
                                matched_keyword: matched,
                                kind,
                            });
                        }
                        if !result.has_more {
                            break;
                        }
                        page += 1;
                    }
                    Err(ApiError::RateLimited { retry_after }) => {
                        if attempt >= options.retry.max_retries {
                            failures.push(format!(
                                "{kind:?} search for {keyword:?}: still rate limited after {attempt} retries"
                            ));
                            break;
                        }
                        (options.sleep)(options.retry.delay(attempt, retry_after));
                        attempt += 1;
                    }
                    Err(ApiError::Auth(msg)) => return Err(Error::Auth(msg)),
                    Err(ApiError::Other(msg)) => {
                        failures.push(format!("{kind:?} search for {keyword:?}, page {page}: {msg}"));
                        break;
                    }
                }
            }
        }
    }
    let mut records: Vec<IssueRecord> = found.into_values().collect();
    records.sort_by(|a, b| (a.kind, &a.issue_id).cmp(&(b.kind, &b.issue_id)));
    Ok(SearchOutcome { records, incomplete: !failures.is_empty(), failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::NaiveDate;

    fn keywords() -> Vec<String> {
        DEFAULT_KEYWORDS.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn local_match_is_case_and_space_insensitive() {
        let k = keywords();
        assert_eq!(local_keyword_match("using cgo here", &k), Some("CGO"));
        assert_eq!(local_keyword_match("calling C\n   go code", &k), Some("C GO"));
        assert_eq!(local_keyword_match("garbage collector pauses", &k), None);
    }

    struct Flaky {
        failures_left: u32,
        auth: bool,
    }

    impl SearchApi for Flaky {
        fn search_page(&mut self, q: &SearchQuery, page: u32, _: u32) -> std::result::Result<SearchPage, ApiError> {
            if self.auth {
                return Err(ApiError::Auth("bad token".into()));
            }
            if self.failures_left > 0 {
                self.failures_left -= 1;
                return Err(ApiError::RateLimited { retry_after: None });
            }
            let items = if q.kind == IssueKind::Issue && page == 1 {
                vec![RawHit { id: "7".into(), title: "cgo crash".into(), body: String::new(), url: "u".into() }]
            } else {
                vec![]
            };
            Ok(SearchPage { items, has_more: false })
        }
    }

    fn repo() -> RepoRecord {
        RepoRecord::new("o/r", "u", 1, false, NaiveDate::from_ymd_opt(2024, 1, 1).unwrap())
    }

    #[test]
    fn retries_then_gives_up_incomplete() {
        let slept = std::cell::Cell::new(0);
        let sleep = |_: Duration| slept.set(slept.get() + 1);
        let opts = SearchOptions {
            retry: RetryPolicy { max_retries: 2, ..RetryPolicy::default() },
            sleep: &sleep,
            ..SearchOptions::default()
        };
        let mut api = Flaky { failures_left: 2, auth: false };
        let out = search_cgo_issues(&repo(), &keywords(), &mut api, &opts).unwrap();
        assert!(!out.incomplete);
        assert_eq!(out.records.len(), 1);
        assert_eq!(slept.get(), 2);

        let mut api = Flaky { failures_left: 100, auth: false };
        let out = search_cgo_issues(&repo(), &keywords(), &mut api, &opts).unwrap();
        assert!(out.incomplete);
    }

    #[test]
    fn auth_failure_is_hard() {
        let sleep = |_: Duration| {};
        let opts = SearchOptions { sleep: &sleep, ..SearchOptions::default() };
        let mut api = Flaky { failures_left: 0, auth: true };
        assert!(matches!(search_cgo_issues(&repo(), &keywords(), &mut api, &opts), Err(Error::Auth(_))));
    }
}
