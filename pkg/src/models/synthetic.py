from pydantic import BaseModel, Field, model_validator


class SyntheticCorpusSpec(BaseModel):
    """Planted-topic corpus description used by fixtures and demos."""

    topics: int = Field(default=3, ge=0, description="Number of planted topics")
    papers_per_topic: int = Field(default=40, ge=1, description="Papers per topic")
    intra_probability: float = Field(default=0.15, ge=0.0, le=1.0)
    inter_probability: float = Field(default=0.005, ge=0.0, le=1.0)
    topic_vocabulary_size: int = Field(default=30, ge=2)
    shared_vocabulary_size: int = Field(default=20, ge=1)
    topic_vocabularies: list[list[str]] | None = Field(
        default=None, description="Explicit per-topic vocabularies; generated when absent"
    )
    shared_vocabulary: list[str] | None = Field(default=None)
    abstract_length: int = Field(default=40, ge=1, description="Words per abstract")
    topic_focus: float = Field(
        default=0.8, ge=0.0, le=1.0, description="Share of abstract words drawn from the topic"
    )
    first_year: int = Field(default=2000, ge=1800, le=2100)
    last_year: int = Field(default=2015, ge=1800, le=2100)
    seed: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _consistent(self) -> "SyntheticCorpusSpec":
        if self.last_year < self.first_year:
            msg = "last_year precedes first_year"
            raise ValueError(msg)
        if self.topic_vocabularies is not None:
            if len(self.topic_vocabularies) != self.topics:
                msg = "one vocabulary per topic is required"
                raise ValueError(msg)
            shared = set(self.shared_vocabulary or ())
            for vocabulary in self.topic_vocabularies:
                if shared & set(vocabulary):
                    msg = "topic vocabularies must be disjoint from the shared vocabulary"
                    raise ValueError(msg)
        return self
