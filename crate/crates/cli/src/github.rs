use std::time::{Duration, SystemTime, UNIX_EPOCH};

use cgoscope_core::corpus::{ApiError, IssueKind, RawHit, SearchApi, SearchPage, SearchQuery};
use reqwest::blocking::{Client, Response};
use reqwest::header::{HeaderMap, ACCEPT, AUTHORIZATION, USER_AGENT};
use reqwest::StatusCode;
use serde::Deserialize;

/// GitHub's search endpoints stop at this many results per query.
const SEARCH_RESULT_CAP: u64 = 1000;

pub struct GitHubSearch {
    client: Client,
    base: String,
    token: String,
}

#[derive(Deserialize)]
struct SearchResponse<T> {
    total_count: u64,
    items: Vec<T>,
}

#[derive(Deserialize)]
struct IssueItem {
    number: u64,
    title: String,
    body: Option<String>,
    html_url: String,
}

#[derive(Deserialize)]
struct CommitItem {
    sha: String,
    html_url: String,
    commit: CommitDetail,
}

#[derive(Deserialize)]
struct CommitDetail {
    message: String,
}

impl GitHubSearch {
    pub fn new(token: String, base: Option<String>) -> anyhow::Result<Self> {
        let client = Client::builder().timeout(Duration::from_secs(60)).build()?;
        let base = base.unwrap_or_else(|| "https://api.github.com".into()).trim_end_matches('/').to_string();
        Ok(GitHubSearch { client, base, token })
    }

    fn get(&self, path: &str, q: &str, page: u32, per_page: u32) -> Result<Response, ApiError> {
        let resp = self
            .client
            .get(format!("{}{path}", self.base))
            .query(&[("q", q), ("page", &page.to_string()), ("per_page", &per_page.to_string())])
            .header(USER_AGENT, "cgoscope")
            .header(ACCEPT, "application/vnd.github+json")
            .header(AUTHORIZATION, format!("Bearer {}", self.token))
            .send()
            .map_err(|e| ApiError::Other(e.to_string()))?;
        match resp.status() {
            s if s.is_success() => Ok(resp),
            StatusCode::UNAUTHORIZED => Err(ApiError::Auth("token rejected (401)".into())),
            StatusCode::FORBIDDEN | StatusCode::TOO_MANY_REQUESTS if is_rate_limited(resp.headers()) => {
                Err(ApiError::RateLimited { retry_after: retry_after(resp.headers()) })
            }
            StatusCode::FORBIDDEN => Err(ApiError::Auth("access forbidden (403)".into())),
            s => Err(ApiError::Other(format!("HTTP {s}"))),
        }
    }
}

fn header_u64(headers: &HeaderMap, name: &str) -> Option<u64> {
    headers.get(name)?.to_str().ok()?.trim().parse().ok()
}

fn is_rate_limited(headers: &HeaderMap) -> bool {
    headers.contains_key("retry-after") || header_u64(headers, "x-ratelimit-remaining") == Some(0)
}

fn retry_after(headers: &HeaderMap) -> Option<Duration> {
    if let Some(secs) = header_u64(headers, "retry-after") {
        return Some(Duration::from_secs(secs));
    }
    let reset = header_u64(headers, "x-ratelimit-reset")?;
    let now = SystemTime::now().duration_since(UNIX_EPOCH).ok()?.as_secs();
    Some(Duration::from_secs(reset.saturating_sub(now) + 1))
}

fn has_more(total: u64, page: u32, per_page: u32) -> bool {
    let seen = u64::from(page) * u64::from(per_page);
    seen < total.min(SEARCH_RESULT_CAP)
}

impl SearchApi for GitHubSearch {
    fn search_page(&mut self, query: &SearchQuery, page: u32, per_page: u32) -> Result<SearchPage, ApiError> {
        let q = format!("\"{}\" repo:{}", query.keyword, query.repo);
        let decode = |e: reqwest::Error| ApiError::Other(format!("bad response: {e}"));
        match query.kind {
            IssueKind::Issue => {
                let r: SearchResponse<IssueItem> =
                    self.get("/search/issues", &q, page, per_page)?.json().map_err(decode)?;
                Ok(SearchPage {
                    has_more: has_more(r.total_count, page, per_page),
                    items: r
                        .items
                        .into_iter()
                        .map(|i| RawHit {
                            id: i.number.to_string(),
                            title: i.title,
                            body: i.body.unwrap_or_default(),
                            url: i.html_url,
                        })
                        .collect(),
                })
            }
            IssueKind::Commit => {
                let r: SearchResponse<CommitItem> =
                    self.get("/search/commits", &q, page, per_page)?.json().map_err(decode)?;
                Ok(SearchPage {
                    has_more: has_more(r.total_count, page, per_page),
                    items: r
                        .items
                        .into_iter()
                        .map(|c| {
                            let (title, body) = c.commit.message.split_once('\n').unwrap_or((&c.commit.message, ""));
                            RawHit {
                                id: c.sha.clone(),
                                title: title.to_string(),
                                body: body.trim().to_string(),
                                url: c.html_url,
                            }
                        })
                        .collect(),
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paging_stops_at_total_and_cap() {
        assert!(has_more(250, 2, 100));
        assert!(!has_more(250, 3, 100));
        assert!(!has_more(5000, 10, 100));
        assert!(!has_more(0, 1, 100));
    }
}
