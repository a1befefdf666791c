
import json
import logging
from datetime import datetime
from sqlalchemy import create_engine, inspect, text, Column, String, DateTime, Float, Integer, Text
from sqlalchemy.orm import declarative_base, sessionmaker
import pandas as pd
from config import DATABASE_URL
logger = logging.getLogger(__name__)
# Create SQLAlchemy engine (SQLite files are only opened on first use)
engine = create_engine(DATABASE_URL)
Session = sessionmaker(bind=engine)
Base = declarative_base()
class ScenarioRun(Base):
    """One execution of an experiment scenario."""
    __tablename__ = 'scenario_runs'
    id = Column(Integer, primary_key=True)
    scenario = Column(String(16), nullable=False)
    created_at = Column(DateTime, nullable=False)
    parameters = Column(Text, nullable=False)
    summary = Column(Text, nullable=False)
    row_count = Column(Integer, nullable=False)
class ChipSpecs(Base):
    """Chip catalog rows."""
    __tablename__ = 'chip_specs'
    id = Column(Integer, primary_key=True)
    device = Column(String(16), nullable=False)
    company = Column(String(50), nullable=False)
    product = Column(String(100), nullable=False)
    node_nm = Column(Integer, nullable=False)
    power_w = Column(Float, nullable=False)
    package_cm2 = Column(Float, nullable=False)
    heat_density_w_cm2 = Column(Float, nullable=False)
def create_tables(bind=None):
    """Create all database tables if they don't exist."""
    try:
        Base.metadata.create_all(bind or engine)
        logger.info("Database tables created successfully")
    except Exception as e:
        logger.error(f"Error creating tables: {e}")
        raise
def get_session(bind=None):
    """Get a database session."""
    if bind is None:
        return Session()
    return sessionmaker(bind=bind)()
def insert_dataframe(df, table_name, bind=None):
    """Insert a pandas DataFrame into a database table."""
    try:
        df.to_sql(table_name, bind or engine, if_exists='append', index=False)
        logger.info(f"Successfully inserted {len(df)} rows into {table_name}")
    except Exception as e:
        logger.error(f"Error inserting data into {table_name}: {e}")
        raise
def read_dataframe(query, params=None, bind=None):
    """Read data from database into a pandas DataFrame."""
    try:
        with (bind or engine).connect() as conn:
            return pd.read_sql_query(text(query), conn, params=params)
    except Exception as e:
        logger.error(f"Error reading data: {e}")
        raise
def table_exists(table_name, bind=None):
    """Check if a table exists in the database."""
    try:
        return inspect(bind or engine).has_table(table_name)
    except Exception as e:
        logger.error(f"Error checking if table exists: {e}")
        return False
def save_scenario_run(scenario, parameters, summary, dataset, bind=None):
    """
    Record a scenario run and append its dataset to '<scenario>_results'.
    Args:
        scenario (str): Scenario name
        parameters (dict): Overrides and sweep axes used
        summary (dict): Headline numbers
        dataset (pd.DataFrame): Scenario rows
        bind: Optional engine (defaults to DATABASE_URL)
    Returns:
        int: Run id
    """
    create_tables(bind)
    session = get_session(bind)
    try:
        run = ScenarioRun(
            scenario=scenario,
            created_at=datetime.now(),
            parameters=json.dumps(parameters, sort_keys=True, default=str),
            summary=json.dumps(summary, sort_keys=True, default=str),
            row_count=len(dataset))
        session.add(run)
        session.commit()
        run_id = run.id
    except Exception as e:
        session.rollback()
        logger.error(f"Error saving scenario run: {e}")
        raise
    finally:
        session.close()
    insert_dataframe(dataset.assign(run_id=run_id), f"{scenario}_results", bind)
    logger.info(f"Stored scenario '{scenario}' as run {run_id}")
    return run_id
