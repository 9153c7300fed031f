"""Retrieval-augmented generation of executable skills from
machine-readable capability models."""

from .apidoc import (InterfaceCatalog, ParameterField, ResourceInterface,
                     full_documentation_text, interface_id, parse_api_doc,
                     serialize_api_doc)
from .capability import (CapabilityModel, PropertySpec, Vocabulary,
                         parse_capability_document, retrieval_query,
                         select_capability)
from .config import PipelineConfig, load_config
from .enrichment import (InterfaceDescription, RelevanceVerdict, assess_relevance,
                         describe_interface, filter_catalog)
from .gateway import ChatRequest, EmbedRequest, GatewayConfig, LlmGateway, cache_key
from .pipeline import Pipeline, PipelineRunRecord, Workspace
from .prompt import (FewShotExample, Prompt, build_prompt, extract_code,
                     generate_skill, load_few_shots)
from .retrieval import RetrievalResult, build_corpus, retrieve_for_capability
from .skillspec import SkillSpecification, parse_skill_spec, serialize_skill_spec
from .vector_index import SearchHit, VectorIndex, cosine_similarity
from .verifier import (AnnotationProfile, Outcome, VerificationReport,
                       check_annotations, check_interface_usage, check_syntax,
                       compile_report, count_code_lines)

__version__ = "0.1.0"
