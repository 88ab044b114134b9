"""Six-part prompt assembly for the three generation tasks.

Every prompt bundle carries the same six labeled sections, in a fixed order:
overall, scenario, user_records, persona, closeness_reference, chat_history.
Section bodies come from template files (one file per part per task) so the
prompt language can be swapped without touching code; placeholder values are
substituted with ``string.Template`` rules.
"""

from __future__ import annotations

import enum
import string
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Sequence

from .errors import InvalidArgument, NoStarters
from .model import ChatTurn, Closeness, MemoryRecord, PartnerPersona

DEFAULT_HISTORY_TURNS = 20

PART_NAMES = (
    "overall",
    "scenario",
    "user_records",
    "persona",
    "closeness_reference",
    "chat_history",
)

SECTION_HEADERS = {
    "overall": "## Overall",
    "scenario": "## Scenario",
    "user_records": "## User Records",
    "persona": "## Partner Persona",
    "closeness_reference": "## Closeness Reference",
    "chat_history": "## Chat History",
}

# Level descriptions shown to the provider, word for word.
CLOSENESS_INSTRUCTIONS = {
    Closeness.AVERAGE: (
        "Use polite, courteous, and distant language, and do not discuss "
        "details in user records at all."
    ),
    Closeness.FAMILIAR: (
        "Use a small amount of detail in the desired content, but still "
        "maintain a certain sense of caution and distance, briefly discuss "
        "the details in personal records."
    ),
    Closeness.VERY_FAMILIAR: (
        "Discuss details in user records, and tend to ask the conversation "
        "partner more detailed questions about the selected user records."
    ),
}


class PromptTask(enum.Enum):
    STARTER = "Starter"
    RESPONSE = "Response"
    ADJUSTMENT = "Adjustment"


@dataclass(frozen=True)
class ClosenessInstruction:
    level: Closeness
    instruction_text: str


def closeness_instruction(level: Closeness) -> ClosenessInstruction:
    return ClosenessInstruction(level=level, instruction_text=CLOSENESS_INSTRUCTIONS[level])


@dataclass(frozen=True)
class PromptContext:
    """Structured facts behind a bundle; consumed by the mock provider and
    by tests, never rendered beyond what the parts already contain."""

    active_closeness: Closeness
    record_texts: tuple[str, ...] = ()
    adjustment_tag: str | None = None
    original_text: str | None = None


@dataclass(frozen=True)
class PromptBundle:
    task: PromptTask
    parts: tuple[tuple[str, str], ...]
    context: PromptContext

    def __post_init__(self):
        names = tuple(name for name, _ in self.parts)
        if names != PART_NAMES:
            raise InvalidArgument(f"prompt parts must be {PART_NAMES}, got {names}")
        for name, text in self.parts:
            if not text.strip():
                raise InvalidArgument(f"prompt part {name!r} is empty")

    def part(self, name: str) -> str:
        for part_name, text in self.parts:
            if part_name == name:
                return text
        raise KeyError(name)

    def render(self) -> str:
        """Byte-stable rendering: header line, body, blank line between parts."""
        sections = [f"{SECTION_HEADERS[name]}\n{text}" for name, text in self.parts]
        return "\n\n".join(sections)


def _load_template(task_dir: str, part: str, template_root: Path | None) -> string.Template:
    if template_root is not None:
        raw = (template_root / task_dir / f"{part}.txt").read_text(encoding="utf-8")
    else:
        raw = (
            resources.files("memochat")
            .joinpath(f"data/templates/{task_dir}/{part}.txt")
            .read_text(encoding="utf-8")
        )
    # lines starting with '#' are template-file comments, not prompt text
    lines = [ln for ln in raw.splitlines() if not ln.startswith("#")]
    return string.Template("\n".join(lines).strip())


def _closeness_reference_block(active: Closeness) -> tuple[str, str]:
    bullets = "\n".join(
        f"- {level.value}: {CLOSENESS_INSTRUCTIONS[level]}" for level in Closeness
    )
    return bullets, CLOSENESS_INSTRUCTIONS[active]


class PromptComposer:
    """Loads the template set once and renders bundles from it."""

    def __init__(
        self,
        template_dir: str | Path | None = None,
        history_turns: int = DEFAULT_HISTORY_TURNS,
    ):
        if history_turns < 1:
            raise InvalidArgument("history budget must be >= 1")
        self.history_turns = history_turns
        root = Path(template_dir) if template_dir is not None else None
        self._templates = {
            (task, part): _load_template(task.value.lower(), part, root)
            for task in PromptTask
            for part in PART_NAMES
        }

    # -- shared section builders -----------------------------------------

    def _records_block(self, records: Sequence[str]) -> str:
        if not records:
            return "none"
        return "\n".join(f"{i}. {text}" for i, text in enumerate(records, start=1))

    def _history_block(self, history: Sequence[ChatTurn]) -> str:
        recent = list(history)[-self.history_turns :]
        if not recent:
            return "none"
        return "\n".join(f"{turn.speaker.value}: {turn.text}" for turn in recent)

    def _fill(self, task: PromptTask, part: str, **values: str) -> str:
        return self._templates[(task, part)].safe_substitute(**values)

    def _build(
        self,
        task: PromptTask,
        persona: PartnerPersona,
        record_texts: Sequence[str],
        history: Sequence[ChatTurn],
        scenario_values: dict,
        context: PromptContext,
    ) -> PromptBundle:
        bullets, active_instruction = _closeness_reference_block(persona.closeness)
        topics = ", ".join(persona.topic_preferences) or "none given"
        parts = (
            ("overall", self._fill(task, "overall")),
            ("scenario", self._fill(task, "scenario", **scenario_values)),
            (
                "user_records",
                self._fill(task, "user_records", records=self._records_block(record_texts)),
            ),
            (
                "persona",
                self._fill(
                    task,
                    "persona",
                    display_name=persona.display_name,
                    topics=topics,
                    closeness=persona.closeness.value,
                ),
            ),
            (
                "closeness_reference",
                self._fill(
                    task,
                    "closeness_reference",
                    reference=bullets,
                    active_level=persona.closeness.value,
                    active_instruction=active_instruction,
                ),
            ),
            (
                "chat_history",
                self._fill(task, "chat_history", history=self._history_block(history)),
            ),
        )
        return PromptBundle(task=task, parts=parts, context=context)

    # -- the three composers ----------------------------------------------

    def compose_response_prompt(
        self,
        utterance: str,
        retrieved: Sequence[MemoryRecord],
        persona: PartnerPersona,
        history: Sequence[ChatTurn] = (),
    ) -> PromptBundle:
        if len(retrieved) > 3:
            raise InvalidArgument(f"at most 3 retrieved records, got {len(retrieved)}")
        record_texts = tuple(r.text for r in retrieved)
        return self._build(
            PromptTask.RESPONSE,
            persona,
            record_texts,
            history,
            scenario_values={"utterance": utterance},
            context=PromptContext(
                active_closeness=persona.closeness, record_texts=record_texts
            ),
        )

    def compose_starter_prompt(
        self,
        starters: Sequence[MemoryRecord],
        persona: PartnerPersona,
        history: Sequence[ChatTurn] = (),
    ) -> PromptBundle:
        if not starters:
            raise NoStarters("no starter records to open a conversation with")
        if len(starters) > 4:
            raise InvalidArgument(f"at most 4 starter records, got {len(starters)}")
        record_texts = tuple(r.text for r in starters)
        return self._build(
            PromptTask.STARTER,
            persona,
            record_texts,
            history,
            scenario_values={"count": str(len(starters))},
            context=PromptContext(
                active_closeness=persona.closeness, record_texts=record_texts
            ),
        )

    def compose_adjustment_prompt(
        self,
        original: str,
        tag: str,
        utterance: str,
        persona: PartnerPersona,
        original_level: Closeness | None = None,
    ) -> PromptBundle:
        if not original.strip():
            raise InvalidArgument("original suggestion text is empty")
        if not tag.strip():
            raise InvalidArgument("adjustment tag is empty")
        level = original_level or persona.closeness
        return self._build(
            PromptTask.ADJUSTMENT,
            persona,
            record_texts=(),
            history=(),
            scenario_values={
                "original": original,
                "tag": tag,
                "utterance": utterance or "none",
                "original_level": level.value,
            },
            context=PromptContext(
                active_closeness=level,
                adjustment_tag=tag,
                original_text=original,
            ),
        )
