//! Corpus construction: repository lists, exclusion rules, issue search, cloning, annotations.

mod annotate;
mod clone;
mod repo;
mod search;

pub use annotate::{known_label_categories, read_annotations, write_annotations, IssueCategory, LabelAnnotation};
pub use clone::{clone_dir_name, clone_repositories, CloneFailure, CloneStatus};
pub use repo::{
    dedup_by_name, filter_repositories, is_excluded, read_repo_csv, write_repo_csv, FilterVerdict, RepoRecord,
};
pub use search::{
    local_keyword_match, search_cgo_issues, ApiError, IssueKind, IssueRecord, RawHit, RetryPolicy, SearchApi,
    SearchOptions, SearchOutcome, SearchPage, SearchQuery, DEFAULT_KEYWORDS,
};
