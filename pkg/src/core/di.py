from dishka import AsyncContainer, Container, Provider, make_async_container, make_container
from dishka.integrations.fastapi import setup_dishka
from fastapi import FastAPI

from src.infrastructure.di import (
    ConfigProvider,
    InfrastructureProvider,
    RepositoryProvider,
    ServiceProvider,
)


def _providers() -> list[Provider]:
    return [ConfigProvider(), RepositoryProvider(), InfrastructureProvider(), ServiceProvider()]


def create_container() -> Container:
    """Synchronous container for the command line."""
    return make_container(*_providers())


def create_async_container() -> AsyncContainer:
    return make_async_container(*_providers())


def setup_di(app: FastAPI) -> None:
    container = create_async_container()
    setup_dishka(container, app)
